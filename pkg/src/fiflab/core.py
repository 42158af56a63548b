"""Domain primitives: partitions, interpolation data, affine maps, functions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateInterval,
    InvalidScaling,
    NotContractive,
    NotStrictlyIncreasing,
    TooFewKnots,
)

Interval = tuple[float, float]

COLLINEAR_TOL = 1e-12


def _check_increasing(values: Sequence[float]) -> None:
    for i in range(1, len(values)):
        if not values[i] > values[i - 1]:
            raise NotStrictlyIncreasing(i)


@dataclass(frozen=True)
class Partition:
    knots: tuple[float, ...]

    def __post_init__(self):
        if len(self.knots) < 3:
            raise TooFewKnots(f"need at least 3 knots, got {len(self.knots)}")
        _check_increasing(self.knots)

    @property
    def P(self) -> int:
        return len(self.knots) - 1

    @property
    def domain(self) -> Interval:
        return (self.knots[0], self.knots[-1])

    @property
    def width(self) -> float:
        return self.knots[-1] - self.knots[0]

    def ratios(self) -> np.ndarray:
        """Interval lengths relative to the domain length, one per interval."""
        k = np.asarray(self.knots)
        return np.diff(k) / (k[-1] - k[0])

    def locate(self, y) -> np.ndarray:
        """0-based interval index; intervals are [y_{p-1}, y_p) except the last."""
        idx = np.searchsorted(np.asarray(self.knots), y, side="right") - 1
        return np.clip(idx, 0, self.P - 1)


def make_partition(abscissae: Sequence[float]) -> Partition:
    return Partition(tuple(float(v) for v in abscissae))


@dataclass(frozen=True)
class InterpolationData:
    ys: tuple[float, ...]
    zs: tuple[float, ...]

    def __post_init__(self):
        if len(self.ys) != len(self.zs):
            raise TooFewKnots("abscissae and ordinates differ in length")
        if len(self.ys) < 3:
            raise TooFewKnots(f"need at least 3 points, got {len(self.ys)}")
        _check_increasing(self.ys)

    @classmethod
    def from_points(cls, points) -> "InterpolationData":
        ys, zs = zip(*points)
        return cls(tuple(float(v) for v in ys), tuple(float(v) for v in zs))

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.ys, self.zs))

    @property
    def partition(self) -> Partition:
        return Partition(self.ys)

    @property
    def P(self) -> int:
        return len(self.ys) - 1

    def is_collinear(self, tol: float = COLLINEAR_TOL) -> bool:
        y = np.asarray(self.ys)
        z = np.asarray(self.zs)
        line = z[0] + (z[-1] - z[0]) * (y - y[0]) / (y[-1] - y[0])
        scale = max(1.0, float(np.max(np.abs(z))))
        return bool(np.max(np.abs(z - line)) <= tol * scale)


@dataclass(frozen=True)
class ScalingVector:
    alphas: tuple[float, ...]

    def __post_init__(self):
        for i, a in enumerate(self.alphas):
            if not np.isfinite(a) or abs(a) >= 1.0:
                raise InvalidScaling(f"|alpha_{i + 1}| = {abs(a)} must be < 1")

    @classmethod
    def uniform(cls, value: float, P: int) -> "ScalingVector":
        return cls((float(value),) * P)

    @classmethod
    def of(cls, values: Sequence[float]) -> "ScalingVector":
        return cls(tuple(float(v) for v in values))

    def __len__(self) -> int:
        return len(self.alphas)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.alphas, dtype=float)

    @property
    def sup_norm(self) -> float:
        return max(abs(a) for a in self.alphas)

    @property
    def abs_sum(self) -> float:
        return sum(abs(a) for a in self.alphas)

    @property
    def is_zero(self) -> bool:
        return all(a == 0.0 for a in self.alphas)


@dataclass(frozen=True)
class AffineMap:
    """y -> a*y + c, carrying ``domain`` onto ``codomain``."""

    a: float
    c: float
    domain: Interval
    codomain: Interval

    def __call__(self, y):
        return self.a * np.asarray(y, dtype=float) + self.c

    def inverse(self, y):
        return (np.asarray(y, dtype=float) - self.c) / self.a


def affine_from_endpoints(domain: Interval, codomain: Interval) -> AffineMap:
    y0, yP = map(float, domain)
    lo, hi = map(float, codomain)
    if not yP > y0 or not hi > lo:
        raise DegenerateInterval(f"degenerate interval in {domain} -> {codomain}")
    width = yP - y0
    a = (hi - lo) / width
    if abs(a) >= 1.0:
        raise NotContractive(f"slope {a} is not contractive")
    c = (yP * lo - y0 * hi) / width
    return AffineMap(a, c, (y0, yP), (lo, hi))


@dataclass(frozen=True)
class ScalarFunction:
    """A real function on a closed interval. ``body`` must accept numpy arrays."""

    domain: Interval
    body: Callable[[np.ndarray], np.ndarray]

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return np.asarray(self.body(y), dtype=float)


@dataclass(frozen=True, eq=False)
class PiecewiseLinear(ScalarFunction):
    """Linear interpolation through (knots, values); constant outside the knots."""

    knots: np.ndarray = field(default=None)
    values: np.ndarray = field(default=None)

    @classmethod
    def through(cls, knots, values) -> "PiecewiseLinear":
        k = np.array(knots, dtype=float)
        v = np.array(values, dtype=float)
        _check_increasing(k)
        k.setflags(write=False)
        v.setflags(write=False)
        return cls((float(k[0]), float(k[-1])), lambda y: np.interp(y, k, v), k, v)


def linear_interpolant(data: InterpolationData) -> PiecewiseLinear:
    return PiecewiseLinear.through(data.ys, data.zs)


def square_base(g: ScalarFunction, domain: Interval | None = None) -> ScalarFunction:
    """b(y) = g(psi(y)), psi(y) = y0 + (y - y0)^2 / (yP - y0).

    psi fixes both endpoints and reduces to y**2 on [0, 1].
    """
    y0, yP = domain if domain is not None else g.domain
    width = yP - y0
    return ScalarFunction((y0, yP), lambda y: g(y0 + (y - y0) ** 2 / width))


def literal_square_base(g: ScalarFunction) -> ScalarFunction:
    """b(y) = g(y**2) taken literally; g is read outside its domain as it extends."""
    return ScalarFunction(g.domain, lambda y: g(y * y))


@dataclass(frozen=True)
class SampledFunction:
    grid: np.ndarray
    values: np.ndarray
    depth: int

    def __post_init__(self):
        if self.grid.shape != self.values.shape:
            raise ValueError("grid and values differ in shape")

    def __call__(self, y):
        return np.interp(y, self.grid, self.values)


def dyadic_grid(partition: Partition, depth: int) -> np.ndarray:
    """Every interval split into 2**depth equal cells; knots are reproduced exactly."""
    n = 2**depth
    k = np.asarray(partition.knots)
    frac = np.arange(n) / n
    cells = k[:-1, None] + frac[None, :] * np.diff(k)[:, None]
    return np.append(cells.ravel(), k[-1])
