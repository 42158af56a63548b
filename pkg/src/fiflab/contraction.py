"""Contraction moduli, example maps, pair-scan checkers and Picard iteration.

The checkers scan ordered pairs (y, z) of a finite sample of the carrier. A
"no-counterexample-found" verdict only means nothing failed at the recorded
resolution; it is not a proof.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .errors import EmptySample, InvalidModulus, NotInCarrier

DEFAULT_TOL = 1e-9
DEFAULT_DELTA = 0.01
MAX_PAIRS = 4_000_000
DISCRETE_CARRIER_MAX = 99

Mode = Literal["banach", "phi", "suzuki"]


# ---------------------------------------------------------------- moduli


@dataclass(frozen=True)
class ContractionModulus:
    """A comparison function phi with phi(t) < t for t > 0.

    Checked on a log-spaced probe grid at construction. The right upper
    semicontinuity condition is not checkable by sampling and is not enforced.
    """

    body: Callable[[np.ndarray], np.ndarray]
    name: str = "phi"
    monotone: bool = False

    def __post_init__(self):
        t = np.logspace(-9, 3, 400)
        bad = ~(np.asarray(self.body(t), dtype=float) < t)
        if bad.any():
            raise InvalidModulus(f"{self.name}(t) >= t at t = {t[bad][0]:g}")

    def __call__(self, t):
        return np.asarray(self.body(np.asarray(t, dtype=float)), dtype=float)


def phi_half(t):
    return np.asarray(t, dtype=float) / 2.0


def phi_piecewise(t):
    t = np.asarray(t, dtype=float)
    return np.where(t <= 1.0, t * t / 2.0, t - 1.0 / 3.0)


PHI_HALF = ContractionModulus(phi_half, "half", monotone=True)
PHI_PIECEWISE = ContractionModulus(phi_piecewise, "piecewise", monotone=True)


# ---------------------------------------------------------------- maps


def example_T_continuous(y):
    y = np.asarray(y, dtype=float)
    out = np.select(
        [y <= 4.0, y <= 5.0, y <= 7.0, y <= 8.0],
        [np.zeros_like(y), 2.0 * y - 8.0, -y / 2.0 + 4.5, -y + 8.0],
        np.zeros_like(y),
    )
    return out if out.ndim else float(out)


def discrete_carrier(n_max: int = DISCRETE_CARRIER_MAX) -> np.ndarray:
    """{0, 1, ..., n_max}: the smallest integer carrier closed under the example map."""
    return np.arange(n_max + 1, dtype=float)


def sparse_discrete_carrier(n_max: int = DISCRETE_CARRIER_MAX) -> np.ndarray:
    """{0, 2} together with the odd numbers up to n_max. Not closed: 5 maps to 4."""
    return np.array(sorted({0, 2} | set(range(1, n_max + 1, 2))), dtype=float)


def example_T_discrete(y, n_max: int = DISCRETE_CARRIER_MAX):
    arr = np.asarray(y, dtype=float)
    ok = (arr >= 0) & (arr <= n_max) & (arr == np.round(arr))
    if not np.all(ok):
        raise NotInCarrier(f"{arr[~ok].ravel()[0]:g} is not in {{0, ..., {n_max}}}")
    out = np.where(arr == 5, 4.0, np.where(arr == 7, 0.0, 1.0))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class MetricSelfMap:
    """A map on a subset of the real line with metric |y - z|.

    ``carrier`` is either an interval ``(lo, hi)`` or a finite sorted array.
    """

    body: Callable[[np.ndarray], np.ndarray]
    carrier: tuple[float, float] | np.ndarray
    name: str = "T"

    @property
    def is_finite(self) -> bool:
        return isinstance(self.carrier, np.ndarray)

    def __call__(self, y):
        return self.body(y)

    def contains(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if self.is_finite:
            return np.isin(y, self.carrier)
        lo, hi = self.carrier
        return (y >= lo - 1e-12) & (y <= hi + 1e-12)

    def image_violations(self, sample: np.ndarray) -> np.ndarray:
        """Sample points whose image leaves the carrier."""
        sample = np.asarray(sample, dtype=float)
        return sample[~self.contains(np.asarray(self.body(sample), dtype=float))]

    def sample(self, delta: float = DEFAULT_DELTA) -> tuple[np.ndarray, float]:
        """Carrier points to scan and the effective resolution.

        Interval carriers are sampled on a uniform grid, coarsened so that the
        ordered pair count stays at or below ``MAX_PAIRS``.
        """
        if self.is_finite:
            pts = np.asarray(self.carrier, dtype=float)
            res = float(np.min(np.diff(pts))) if len(pts) > 1 else 0.0
            return pts, res
        lo, hi = self.carrier
        n = int(round((hi - lo) / delta)) + 1
        cap = math.isqrt(MAX_PAIRS)
        if n > cap:
            n = cap
            delta = (hi - lo) / (n - 1)
        # rounding makes decimal grid points such as 4.5 exact
        pts = np.round(lo + delta * np.arange(n), 12)
        return pts, float(delta)


def continuous_example(domain=(0.0, 12.0)) -> MetricSelfMap:
    return MetricSelfMap(example_T_continuous, tuple(map(float, domain)), "t-continuous")


def discrete_example(n_max: int = DISCRETE_CARRIER_MAX, sparse_carrier: bool = False) -> MetricSelfMap:
    carrier = sparse_discrete_carrier(n_max) if sparse_carrier else discrete_carrier(n_max)
    # membership is checked against the extended carrier; 4 must be accepted
    return MetricSelfMap(lambda y: example_T_discrete(y, n_max), carrier, "t-discrete")


# ---------------------------------------------------------------- checkers


@dataclass(frozen=True)
class Witness:
    y: float
    z: float
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {"y": self.y, "z": self.z, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack}


@dataclass(frozen=True)
class CheckReport:
    mode: str
    witnesses: tuple[Witness, ...]
    sample_size: int
    resolution: float
    tol: float = DEFAULT_TOL
    skipped: int = 0

    @property
    def verdict(self) -> str:
        return "counterexamples-found" if self.witnesses else "no-counterexample-found"

    @property
    def found(self) -> bool:
        return bool(self.witnesses)

    def find(self, y: float, z: float) -> Witness | None:
        for w in self.witnesses:
            if w.y == y and w.z == z:
                return w
        return None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "verdict": self.verdict,
            "resolution": self.resolution,
            "sample_size": self.sample_size,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def _scan(T: MetricSelfMap, sample, mode: Mode, bound, tol: float, block: int = 512) -> CheckReport:
    if sample is None:
        pts, res = T.sample()
    elif np.ndim(sample) == 0:
        pts, res = T.sample(float(sample))
    else:
        pts = np.asarray(sample, dtype=float)
        res = float(np.min(np.diff(np.sort(pts)))) if len(pts) > 1 else 0.0
    if len(pts) < 2:
        raise EmptySample("need at least two sample points")
    Tp = np.asarray(T(pts), dtype=float)
    move = np.abs(pts - Tp)
    found = []
    skipped = 0
    for start in range(0, len(pts), block):
        y = pts[start:start + block, None]
        Ty = Tp[start:start + block, None]
        dyz = np.abs(y - pts[None, :])
        lhs = np.abs(Ty - Tp[None, :])
        if mode == "banach":
            rhs = bound * dyz
            active = np.ones_like(lhs, dtype=bool)
        elif mode == "phi":
            rhs = bound(dyz)
            active = np.ones_like(lhs, dtype=bool)
        else:
            my = move[start:start + block, None]
            m = np.maximum(dyz, np.maximum(my, move[None, :]))
            rhs = bound(m)
            active = 0.5 * my <= dyz
            skipped += int((~active).sum())
        bad = active & (lhs > rhs + tol)
        for i, j in zip(*np.nonzero(bad)):
            found.append(Witness(float(pts[start + i]), float(pts[j]), float(lhs[i, j]), float(rhs[i, j])))
    found.sort(key=lambda w: (w.y, w.z))
    return CheckReport(mode, tuple(found), len(pts) ** 2, res, tol, skipped)


def check_banach(T: MetricSelfMap, sample=None, ratio_bound: float = 0.5, tol: float = DEFAULT_TOL) -> CheckReport:
    """Pairs with d(Ty, Tz) > ratio_bound * d(y, z) + tol."""
    if not 0.0 < ratio_bound < 1.0:
        raise ValueError("ratio_bound must lie in (0, 1)")
    return _scan(T, sample, "banach", ratio_bound, tol)


def check_phi(T: MetricSelfMap, phi: ContractionModulus, sample=None, tol: float = DEFAULT_TOL) -> CheckReport:
    """Pairs with d(Ty, Tz) > phi(d(y, z)) + tol."""
    return _scan(T, sample, "phi", phi, tol)


def check_suzuki(T: MetricSelfMap, phi: ContractionModulus, sample=None, tol: float = DEFAULT_TOL) -> CheckReport:
    """Pairs where d(y, Ty)/2 <= d(y, z) holds but d(Ty, Tz) > phi(m) + tol.

    m = max(d(y, z), d(y, Ty), d(z, Tz)). Pairs failing the premise are skipped.
    """
    return _scan(T, sample, "suzuki", phi, tol)


# ---------------------------------------------------------------- Picard


@dataclass(frozen=True)
class FixedPointResult:
    point: float
    iterations: int
    residual: float
    converged: bool
    trajectory: tuple[float, ...] = field(default=(), repr=False)


def picard_fixed_point(T: MetricSelfMap, start: float, tol: float = 1e-12, max_iter: int = 100) -> FixedPointResult:
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not T.contains(start):
        raise NotInCarrier(f"start {start} is not in the carrier")
    y = float(start)
    path = [y]
    for k in range(1, max_iter + 1):
        nxt = float(T(y))
        step = abs(nxt - y)
        if step <= tol:
            return FixedPointResult(y, k, step, True, tuple(path))
        y = nxt
        path.append(y)
    return FixedPointResult(y, max_iter, abs(float(T(y)) - y), False, tuple(path))


def picard_from_all(T: MetricSelfMap, starts: Sequence[float], **kw) -> list[FixedPointResult]:
    return [picard_fixed_point(T, s, **kw) for s in starts]
