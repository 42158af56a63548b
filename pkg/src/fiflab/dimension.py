"""Box dimension of FIF graphs: analytic root finding and empirical box counting."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core import InterpolationData, Partition, ScalingVector
from .errors import DegenerateRange, EmptyCloud, InvalidRatios, LengthMismatch
from .ifs import PointCloud

log = logging.getLogger(__name__)

ROOT_TOL = 1e-10
MAX_BISECT = 200


@dataclass(frozen=True)
class DimensionResult:
    value: float
    method: str  # "analytic" | "boxcount"
    residual: float | None = None
    scales: tuple[tuple[int, float, int], ...] = ()
    slope: float | None = None
    r2: float | None = None
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        out = {"method": self.method, "value": self.value}
        if self.method == "analytic":
            out["residual"] = self.residual
        else:
            out["scales"] = [{"k": k, "epsilon": e, "count": n} for k, e, n in self.scales]
            out["slope"] = self.slope
            out["r2"] = self.r2
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def moran_sum(alpha: np.ndarray, ratios: np.ndarray, D: float) -> float:
    """sum_p |alpha_p| * a_p**(D - 1)."""
    return float(np.sum(np.abs(alpha) * ratios ** (D - 1.0)))


def analytic_box_dimension(alpha: ScalingVector, partition: Partition) -> DimensionResult:
    """1 if sum |alpha_p| <= 1, else the root D > 1 of sum |alpha_p| a_p^(D-1) = 1.

    a_p are interval lengths relative to the whole domain. The left side is
    strictly decreasing in D, so plain bisection is safe once bracketed.
    """
    if len(alpha) != partition.P:
        raise LengthMismatch(f"{len(alpha)} scaling factors for {partition.P} intervals")
    ratios = partition.ratios()
    if np.any(ratios <= 0) or np.any(ratios >= 1):
        raise InvalidRatios("contraction ratios must lie in (0, 1)")
    al = alpha.as_array()
    if np.sum(np.abs(al)) <= 1.0:
        return DimensionResult(1.0, "analytic", residual=0.0)
    lo, hi = 1.0, 2.0
    while moran_sum(al, ratios, hi) >= 1.0:
        lo, hi = hi, 2.0 * hi
    for _ in range(MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if moran_sum(al, ratios, mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    D = 0.5 * (lo + hi)
    res = moran_sum(al, ratios, D) - 1.0
    if abs(res) > ROOT_TOL:  # pragma: no cover - bisection to 1e-15 always lands here
        log.warning("Moran residual %g above tolerance", res)
    return DimensionResult(D, "analytic", residual=res)


def fif_dimension(data: InterpolationData, alpha: ScalingVector) -> DimensionResult:
    """Analytic dimension with the collinear-data guard (a line segment has D = 1)."""
    if data.is_collinear():
        msg = "interpolation data are collinear; the dimension formula does not apply, graph is a segment"
        log.warning(msg)
        return DimensionResult(1.0, "analytic", residual=0.0, warnings=(msg,))
    return analytic_box_dimension(alpha, data.partition)


def _points(cloud) -> np.ndarray:
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=float).reshape(-1, 2)
    if not len(pts):
        raise EmptyCloud("box counting needs a nonempty cloud")
    return pts


def box_count(cloud, epsilons) -> list[tuple[float, int]]:
    """Occupied grid cells of side eps, cells [i eps, (i+1) eps) anchored at 0.

    The cloud is taken to be already in the unit square; points on the top or
    right edge are clamped into the last cell.
    """
    pts = _points(cloud)
    out = []
    for eps in epsilons:
        eps = float(eps)
        if not 0.0 < eps <= 1.0:
            raise ValueError(f"epsilon {eps} outside (0, 1]")
        n = int(np.ceil(1.0 / eps - 1e-12))
        idx = np.clip(np.floor(pts / eps).astype(np.int64), 0, n - 1)
        codes = idx[:, 0] * n + idx[:, 1]
        out.append((eps, int(np.unique(codes).size)))
    return out


def estimate_box_dimension(cloud, k_min: int = 3, k_max: int = 9) -> DimensionResult:
    """Least-squares slope of log N vs log(1/eps) over eps = 2**-k, k_min..k_max."""
    if k_max - k_min < 3:
        raise DegenerateRange(f"need k_max - k_min >= 3, got {k_min}..{k_max}")
    pts = _points(cloud)
    warnings = []
    if len(pts) < 10 * 4**k_max:
        warnings.append(f"cloud has {len(pts)} points; {10 * 4**k_max} recommended for k_max={k_max}")
    norm = PointCloud(pts).normalized()
    ks = list(range(k_min, k_max + 1))
    counts = box_count(norm, [2.0**-k for k in ks])
    x = np.array(ks, dtype=float) * np.log(2.0)
    yv = np.log([n for _, n in counts])
    slope, intercept = np.polyfit(x, yv, 1)
    fit = slope * x + intercept
    ss_tot = float(np.sum((yv - yv.mean()) ** 2))
    r2 = 1.0 - float(np.sum((yv - fit) ** 2)) / ss_tot if ss_tot > 0 else 1.0
    scales = tuple((k, eps, n) for k, (eps, n) in zip(ks, counts))
    return DimensionResult(float(slope), "boxcount", scales=scales, slope=float(slope), r2=r2,
                           warnings=tuple(warnings))
