import numpy as np
import pytest

from fiflab.core import ScalingVector, linear_interpolant, literal_square_base, square_base
from fiflab.data_io import figure1_fixture, normalize_series, spinach_fixture
from fiflab.fif import construct_alpha_fif

SPINACH_Z = (8.0, 7.5, 6.0, 7.0, 10.0, 5.0, 7.0, 5.5, 7.5, 8.5, 10.0)
MIXED = (0.1, 0.2, 0.5, 0.2, 0.4, 0.2, 0.4, 0.2, 0.3, 0.1)

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def spinach():
    return normalize_series(spinach_fixture())


@pytest.fixture(scope="session")
def spinach_g(spinach):
    return linear_interpolant(spinach)


@pytest.fixture(scope="session")
def spinach_b(spinach_g):
    return square_base(spinach_g)


@pytest.fixture(scope="session")
def figure1():
    return figure1_fixture()


@pytest.fixture(scope="session")
def figure1_gb(figure1):
    g = linear_interpolant(figure1)
    return g, literal_square_base(g)


@pytest.fixture(scope="session")
def spinach_builds(spinach, spinach_g, spinach_b):
    """Converged depth-10 builds for the four case-study configurations."""
    configs = {"0.4": ScalingVector.uniform(0.4, 10), "0.6": ScalingVector.uniform(0.6, 10),
               "mixed": ScalingVector.of(MIXED), "0.0": ScalingVector.uniform(0.0, 10)}
    return {k: construct_alpha_fif(spinach, spinach_g, spinach_b, a) for k, a in configs.items()}


def brute_rb(grid, h, knots, alphas, g, b):
    """Reference RB step: one node at a time with np.interp, no precomputation."""
    out = np.empty_like(h)
    y0, yP = knots[0], knots[-1]
    for j, y in enumerate(grid):
        p = min(np.searchsorted(knots, y, side="right") - 1, len(knots) - 2)
        lo, hi = knots[p], knots[p + 1]
        u = y0 + (y - lo) / (hi - lo) * (yP - y0)
        out[j] = float(g(y)) + alphas[p] * (np.interp(u, grid, h) - float(b(u)))
    return out
