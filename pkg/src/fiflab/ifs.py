"""IFS assembly, attractor rendering and Hausdorff distances between clouds."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .core import (
    AffineMap,
    InterpolationData,
    ScalarFunction,
    ScalingVector,
    affine_from_endpoints,
    dyadic_grid,
)
from .errors import BaseEndpointMismatch, DegenerateBase, EmptyCloud, LengthMismatch, SeedMismatch

JOIN_TOL = 1e-10


def worker_count() -> int:
    """Internal worker cap, read from FIFLAB_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("FIFLAB_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray  # shape (n, 2), columns y, z

    @classmethod
    def of(cls, points) -> "PointCloud":
        arr = np.asarray(points, dtype=float).reshape(-1, 2)
        return cls(arr)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def y(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def z(self) -> np.ndarray:
        return self.points[:, 1]

    @property
    def bounding_box(self) -> tuple[float, float, float, float]:
        if not len(self):
            raise EmptyCloud("empty cloud has no bounding box")
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1])

    def normalized(self) -> "PointCloud":
        """Affine rescale of the bounding box onto the unit square."""
        if not len(self):
            raise EmptyCloud("cannot normalize an empty cloud")
        lo = self.points.min(axis=0)
        span = self.points.max(axis=0) - lo
        span[span == 0] = 1.0
        return PointCloud((self.points - lo) / span)


@dataclass(frozen=True, eq=False)
class IfsSystem:
    data: InterpolationData
    maps: tuple[AffineMap, ...]
    alpha: ScalingVector
    g: ScalarFunction
    b: ScalarFunction

    @property
    def P(self) -> int:
        return len(self.maps)

    @property
    def slopes(self) -> np.ndarray:
        return np.array([m.a for m in self.maps])

    @property
    def intercepts(self) -> np.ndarray:
        return np.array([m.c for m in self.maps])

    def q(self, p: int, y):
        """q_p(y) = g(L_p(y)) - alpha_p * b(y) on the whole domain (p is 0-based)."""
        return self.g(self.maps[p](y)) - self.alpha.alphas[p] * self.b(y)

    @property
    def q_functions(self) -> list[ScalarFunction]:
        dom = (self.data.ys[0], self.data.ys[-1])
        return [ScalarFunction(dom, lambda y, p=p: self.q(p, y)) for p in range(self.P)]

    def F(self, p: int, y, z):
        return self.alpha.alphas[p] * np.asarray(z, dtype=float) + self.q(p, y)

    def w(self, p: int, y, z):
        return self.maps[p](y), self.F(p, y, z)

    def join_errors(self) -> np.ndarray:
        """|w_p(end) - knot| for both domain endpoints, per map."""
        ys, zs = self.data.ys, self.data.zs
        errs = []
        for p in range(self.P):
            for (y, z), (ty, tz) in (((ys[0], zs[0]), (ys[p], zs[p])), ((ys[-1], zs[-1]), (ys[p + 1], zs[p + 1]))):
                wy, wz = self.w(p, y, z)
                errs.append(max(abs(float(wy) - ty), abs(float(wz) - tz)))
        return np.asarray(errs)


def build_ifs(data: InterpolationData, alpha: ScalingVector, g: ScalarFunction, b: ScalarFunction) -> IfsSystem:
    if len(alpha) != data.P:
        raise LengthMismatch(f"{len(alpha)} scaling factors for {data.P} intervals")
    ys = np.asarray(data.ys)
    zs = np.asarray(data.zs)
    miss = np.abs(g(ys) - zs)
    if miss.max() > JOIN_TOL:
        raise SeedMismatch(f"seed function misses knot {int(miss.argmax())} by {miss.max():g}")
    ends = np.array([ys[0], ys[-1]])
    if np.max(np.abs(b(ends) - g(ends))) > JOIN_TOL:
        raise BaseEndpointMismatch("base function must agree with the seed at both domain endpoints")
    if not alpha.is_zero:
        grid = dyadic_grid(data.partition, 6)
        if np.max(np.abs(g(grid) - b(grid))) <= 1e-12:
            raise DegenerateBase("base function coincides with the seed function")
    dom = (data.ys[0], data.ys[-1])
    maps = tuple(affine_from_endpoints(dom, (data.ys[p], data.ys[p + 1])) for p in range(data.P))
    system = IfsSystem(data, maps, alpha, g, b)
    err = system.join_errors().max()
    if err > JOIN_TOL:
        raise SeedMismatch(f"join conditions violated by {err:g}")
    return system


def hutchinson_step(ifs: IfsSystem, cloud: PointCloud) -> PointCloud:
    """Union of w_p(cloud) over p, concatenated in map order."""
    if not len(cloud):
        raise EmptyCloud("hutchinson_step needs a nonempty cloud")
    y, z = cloud.y, cloud.z
    parts = [np.column_stack(ifs.w(p, y, z)) for p in range(ifs.P)]
    return PointCloud(np.concatenate(parts))


def decimate(cloud: PointCloud, cap: int) -> PointCloud:
    if len(cloud) <= cap:
        return cloud
    stride = math.ceil(len(cloud) / cap)
    return PointCloud(cloud.points[::stride])


def deterministic_attractor(ifs: IfsSystem, seed: PointCloud | None = None, iterations: int = 10,
                            cap: int = 100_000) -> PointCloud:
    """Repeated Hutchinson steps from ``seed`` (default: the data points).

    Each round is thinned to at most ``cap`` points by a fixed stride.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    cloud = PointCloud.of(ifs.data.points) if seed is None else seed
    if not len(cloud):
        raise EmptyCloud("seed cloud is empty")
    for _ in range(iterations):
        cloud = decimate(hutchinson_step(ifs, cloud), cap)
    return cloud


def chaos_game(ifs: IfsSystem, n_points: int, burn_in: int = 100, seed: int = 42,
               walkers: int = 256, weights=None) -> PointCloud:
    """Random-iteration rendering, starting every orbit at (y_0, z_0).

    ``walkers`` independent orbits advance together so each step is one
    vectorized update; ``walkers=1`` is the classical single orbit. Output
    order is step-major and fully determined by ``seed``.
    """
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    rng = np.random.default_rng(seed)
    m = max(1, min(walkers, n_points))
    steps = math.ceil(n_points / m)
    a = ifs.slopes
    c = ifs.intercepts
    al = ifs.alpha.as_array()
    y = np.full(m, ifs.data.ys[0])
    z = np.full(m, ifs.data.zs[0])
    out = np.empty((steps, m, 2))
    P = ifs.P
    for k in range(burn_in + steps):
        p = rng.choice(P, size=m, p=weights) if weights is not None else rng.integers(P, size=m)
        ny = a[p] * y + c[p]
        z = al[p] * z + ifs.g(ny) - al[p] * ifs.b(y)
        y = ny
        if k >= burn_in:
            out[k - burn_in, :, 0] = y
            out[k - burn_in, :, 1] = z
    return PointCloud(out.reshape(-1, 2)[:n_points])


def directed_hausdorff(a: PointCloud, b: PointCloud) -> float:
    """sup over a of the distance to the nearest point of b (exact, via k-d tree)."""
    dist, _ = cKDTree(b.points).query(a.points, k=1, workers=worker_count())
    return float(dist.max())


def hausdorff_distance(a: PointCloud, b: PointCloud) -> float:
    if not len(a) or not len(b):
        raise EmptyCloud("Hausdorff distance needs two nonempty clouds")
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))
