import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fiflab.contraction import example_T_continuous
from fiflab.core import ScalarFunction, ScalingVector, linear_interpolant, square_base
from fiflab.errors import BaseEndpointMismatch, DegenerateBase, EmptyCloud, InvalidScaling, LengthMismatch, SeedMismatch
from fiflab.ifs import (
    PointCloud,
    build_ifs,
    chaos_game,
    deterministic_attractor,
    hausdorff_distance,
    hutchinson_step,
)


def brute_hausdorff(a, b):
    d = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(-1))
    return max(d.min(axis=1).max(), d.min(axis=0).max())


@pytest.fixture(scope="module")
def sys04(spinach, spinach_g, spinach_b):
    return build_ifs(spinach, ScalingVector.uniform(0.4, 10), spinach_g, spinach_b)


def test_build_spinach(sys04):
    assert sys04.P == 10
    assert np.allclose(sys04.slopes, 0.1, atol=1e-15)
    assert sys04.join_errors().max() <= 1e-10
    for p, q in enumerate(sys04.q_functions):
        assert q(0.3) == pytest.approx(sys04.q(p, 0.3))


def test_build_figure1(figure1):
    # g is the continuous example map restricted to [4, 10]; b(y) = g(y^2) vanishes there
    g = ScalarFunction((4.0, 10.0), example_T_continuous)
    b = ScalarFunction((4.0, 10.0), lambda y: example_T_continuous(y * y))
    assert np.allclose(linear_interpolant(figure1)(np.linspace(4, 10, 61)), g(np.linspace(4, 10, 61)))
    system = build_ifs(figure1, ScalingVector.uniform(0.5, 6), g, b)
    assert np.all(b(np.linspace(4, 10, 50)) == 0)
    assert system.join_errors().max() <= 1e-10


def test_build_rejections(spinach, spinach_g, spinach_b):
    with pytest.raises(InvalidScaling):
        ScalingVector.of([0.4] * 9 + [1.0])
    with pytest.raises(LengthMismatch):
        build_ifs(spinach, ScalingVector.uniform(0.4, 9), spinach_g, spinach_b)
    wrong = ScalarFunction((0, 1), lambda y: spinach_g(y) + 0.1 * y)
    with pytest.raises(SeedMismatch):
        build_ifs(spinach, ScalingVector.uniform(0.4, 10), wrong, spinach_b)
    with pytest.raises(BaseEndpointMismatch):
        build_ifs(spinach, ScalingVector.uniform(0.4, 10), spinach_g, ScalarFunction((0, 1), lambda y: 0 * y))
    with pytest.raises(DegenerateBase):
        build_ifs(spinach, ScalingVector.uniform(0.4, 10), spinach_g, spinach_g)
    # allowed through the alpha = 0 path
    build_ifs(spinach, ScalingVector.uniform(0.0, 10), spinach_g, spinach_g)


def test_hutchinson_contains_data(sys04, spinach):
    out = hutchinson_step(sys04, PointCloud.of(spinach.points))
    assert len(out) == 10 * 11
    for y, z in spinach.points:
        assert np.min(np.hypot(out.y - y, out.z - z)) <= 1e-12


def test_hutchinson_empty(sys04):
    with pytest.raises(EmptyCloud):
        hutchinson_step(sys04, PointCloud(np.empty((0, 2))))


def test_alpha_zero_stays_on_graph(spinach, spinach_g, spinach_b):
    s0 = build_ifs(spinach, ScalingVector.uniform(0.0, 10), spinach_g, spinach_b)
    ys = np.linspace(0, 1, 37)
    out = hutchinson_step(s0, PointCloud(np.column_stack([ys, spinach_g(ys)])))
    assert np.max(np.abs(out.z - spinach_g(out.y))) <= 1e-9
    det = deterministic_attractor(s0, iterations=4, cap=20_000)
    assert np.max(np.abs(det.z - spinach_g(det.y))) <= 1e-9
    cg = chaos_game(s0, 100_000, seed=1)
    assert np.max(np.abs(cg.z - spinach_g(cg.y))) <= 1e-9


def test_deterministic_one_iteration_is_step(sys04, spinach):
    seed = PointCloud.of(spinach.points)
    assert np.array_equal(deterministic_attractor(sys04, seed, 1).points, hutchinson_step(sys04, seed).points)


def test_deterministic_coverage(sys04):
    cloud = deterministic_attractor(sys04, iterations=12, cap=200_000)
    ys = np.sort(cloud.y)
    assert ys[0] == pytest.approx(0.0, abs=1e-12) and ys[-1] >= 1 - 1e-3
    assert np.max(np.diff(ys)) < 1e-3


def test_chaos_game_reproducible(sys04):
    a = chaos_game(sys04, 10, burn_in=0, seed=7)
    b = chaos_game(sys04, 10, burn_in=0, seed=7)
    assert len(a) == 10 and np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, chaos_game(sys04, 10, burn_in=0, seed=8).points)


def test_chaos_game_bounding_box(spinach, spinach_g, spinach_b):
    system = build_ifs(spinach, ScalingVector.uniform(0.6, 10), spinach_g, spinach_b)
    cloud = chaos_game(system, 1_000_000, seed=42)
    ylo, yhi, zlo, zhi = cloud.bounding_box
    ys = np.linspace(0, 1, 10241)
    gap = np.max(np.abs(spinach_g(ys) - spinach_b(ys)))
    slack = 0.6 / 0.4 * gap
    assert ylo >= 0 and yhi <= 1
    assert zlo >= min(spinach.zs) - slack and zhi <= max(spinach.zs) + slack


def test_hausdorff_examples():
    a = PointCloud.of([(0, 0), (1, 0)])
    assert hausdorff_distance(a, a) == 0
    assert hausdorff_distance(PointCloud.of([(0, 0)]), PointCloud.of([(3, 4)])) == 5
    assert hausdorff_distance(a, PointCloud.of([(0, 0)])) == 1
    with pytest.raises(EmptyCloud):
        hausdorff_distance(a, PointCloud(np.empty((0, 2))))


clouds = st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=20).map(
    lambda pts: PointCloud.of(pts))


@given(clouds, clouds, clouds)
def test_hausdorff_metric_axioms(a, b, c):
    ab = hausdorff_distance(a, b)
    assert ab == hausdorff_distance(b, a)
    assert ab <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-12
    assert hausdorff_distance(a, a) == 0
    assert ab == pytest.approx(brute_hausdorff(a.points, b.points), abs=1e-12)


def test_attractor_invariance(sys04):
    r = deterministic_attractor(sys04, iterations=10, cap=100_000)
    step = hutchinson_step(sys04, r)
    # 0.4**10 times the data range leaves ~1e-3; the rest is decimation spacing
    assert hausdorff_distance(r.normalized(), step.normalized()) <= 0.01


def test_successive_iterates_shrink(sys04, spinach):
    seed = PointCloud.of(spinach.points)
    clouds = [seed]
    for _ in range(7):
        clouds.append(deterministic_attractor(sys04, clouds[-1], 1, cap=30_000))
    d = [hausdorff_distance(x, y) for x, y in zip(clouds, clouds[1:])]
    for prev, nxt in zip(d[3:], d[4:]):
        assert nxt <= prev + 0.02
