"""Alpha-fractal functions as fixed points of the Read-Bajraktarevic operator.

On a grid node y in interval p the operator reads

    (T h)(y) = g(y) + alpha_p * (h(u) - b(u)),    u = L_p^{-1}(y),

which is F_p(u, h(u)) with q_p(u) = g(L_p(u)) - alpha_p b(u). The carrier is a
dyadic grid per interval; h is read at the generally off-grid points u by
linear interpolation. Interpolation weights are convex, so the discrete
operator is a contraction with the same ratio max |alpha_p|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import InterpolationData, SampledFunction, ScalarFunction, ScalingVector, dyadic_grid
from .errors import GridMismatch, NoConvergence, OutOfDomain
from .ifs import IfsSystem, build_ifs

DEFAULT_DEPTH = 10
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200
BOUND_SLACK = 1e-9
KNOT_SNAP = 1e-12


class _RBKernel:
    """Everything about the operator that does not depend on h, precomputed."""

    def __init__(self, system: IfsSystem, depth: int):
        part = system.data.partition
        self.depth = depth
        self.grid = dyadic_grid(part, depth)
        n = 2**depth
        j = np.arange(len(self.grid))
        p = np.minimum(j // n, part.P - 1)
        y0, yP = part.domain
        # preimage under L_p: same local position, spread over the whole domain
        self.u = y0 + ((j - p * n) / n) * (yP - y0)
        self.u[-1] = yP
        self.alpha = system.alpha.as_array()[p]
        self.interval = p
        self.g_y = system.g(self.grid)
        self.b_u = system.b(self.u)
        idx = np.clip(np.searchsorted(self.grid, self.u, side="right") - 1, 0, len(self.grid) - 2)
        left, right = self.grid[idx], self.grid[idx + 1]
        self.idx = idx
        self.frac = np.clip((self.u - left) / (right - left), 0.0, 1.0)

    def read_at_u(self, values: np.ndarray) -> np.ndarray:
        return values[self.idx] * (1.0 - self.frac) + values[self.idx + 1] * self.frac

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.g_y + self.alpha * (self.read_at_u(values) - self.b_u)


def rb_apply(system: IfsSystem, h: SampledFunction) -> SampledFunction:
    kernel = _RBKernel(system, h.depth)
    if h.grid.shape != kernel.grid.shape or not np.array_equal(h.grid, kernel.grid):
        raise GridMismatch("h is not sampled on the system's dyadic grid")
    return SampledFunction(kernel.grid, kernel.apply(h.values), h.depth)


@dataclass(frozen=True, eq=False)
class FractalFunction:
    system: IfsSystem
    samples: SampledFunction
    depth: int
    iterations_used: int
    final_residual: float
    tol: float
    converged: bool = True
    history: tuple[float, ...] = field(default=(), repr=False)

    @property
    def grid(self) -> np.ndarray:
        return self.samples.grid

    @property
    def values(self) -> np.ndarray:
        return self.samples.values

    def __call__(self, y, depth_override: int | None = None):
        return eval_fif(self, y, depth_override)

    def ratios(self) -> np.ndarray:
        """Successive sup-difference ratios of the RB iterates."""
        h = np.asarray(self.history)
        with np.errstate(divide="ignore", invalid="ignore"):
            return h[1:] / h[:-1]

    def metadata(self) -> dict:
        return {
            "alpha": list(self.system.alpha.alphas),
            "depth": self.depth,
            "iterations": self.iterations_used,
            "residual": residual_sup(self),
            "bound": perturbation_bound(self.system.g, self.system.b, self.system.alpha, bound_grid(self)),
            "sup_dev": sup_deviation(self),
        }


def construct_alpha_fif(data: InterpolationData, g: ScalarFunction, b: ScalarFunction, alpha: ScalingVector,
                        depth: int = DEFAULT_DEPTH, tol: float = DEFAULT_TOL,
                        max_iter: int = DEFAULT_MAX_ITER, strict: bool = True) -> FractalFunction:
    """Iterate the RB operator from the seed samples until the sup step is <= tol.

    With ``strict=False`` an unconverged result is returned (flagged) instead of
    raising NoConvergence.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    system = build_ifs(data, alpha, g, b)
    return iterate_system(system, depth, tol, max_iter, strict)


def iterate_system(system: IfsSystem, depth: int = DEFAULT_DEPTH, tol: float = DEFAULT_TOL,
                   max_iter: int = DEFAULT_MAX_ITER, strict: bool = True) -> FractalFunction:
    kernel = _RBKernel(system, depth)
    h = kernel.g_y.copy()
    history = []
    step = math.inf
    for _ in range(max_iter):
        nxt = kernel.apply(h)
        step = float(np.max(np.abs(nxt - h)))
        history.append(step)
        h = nxt
        if step <= tol:
            break
    converged = step <= tol
    if not converged and strict:
        raise NoConvergence(f"no convergence after {max_iter} iterations (step {step:g})")
    h.setflags(write=False)
    samples = SampledFunction(kernel.grid, h, depth)
    return FractalFunction(system, samples, depth, len(history), step, tol, converged, tuple(history))


def eval_fif(ff: FractalFunction, y, depth_override: int | None = None):
    """Evaluate by unrolling g^a(y) = g(y) + a_p (g^a(u) - b(u)) for K levels.

    The innermost g^a is replaced by g, which gives T^K g exactly; K defaults
    to the number of iterations used in construction.
    """
    system = ff.system
    part = system.data.partition
    y0, yP = part.domain
    arr = np.asarray(y, dtype=float)
    span = yP - y0
    if np.any(arr < y0 - 1e-12 * span) or np.any(arr > yP + 1e-12 * span):
        raise OutOfDomain(f"evaluation point outside [{y0}, {yP}]")
    K = ff.iterations_used if depth_override is None else depth_override
    x = np.clip(arr, y0, yP)
    knots = np.asarray(part.knots)
    alphas = system.alpha.as_array()
    total = np.zeros_like(x)
    coef = np.ones_like(x)
    for _ in range(K):
        x = _snap(x, knots, KNOT_SNAP * span)
        p = part.locate(x)
        a = alphas[p]
        u = (x - system.intercepts[p]) / system.slopes[p]
        u = np.clip(u, y0, yP)
        total += coef * (system.g(x) - a * system.b(u))
        coef = coef * a
        x = u
        if not np.any(coef):
            break
    total += coef * system.g(x)
    return total if total.ndim else float(total)


def _snap(x: np.ndarray, knots: np.ndarray, tol: float) -> np.ndarray:
    # rounding can push a knot just below itself, flipping its interval and
    # sending the recursion to the opposite end of the domain
    i = np.clip(np.searchsorted(knots, x), 1, len(knots) - 1)
    near = np.where(np.abs(x - knots[i - 1]) < np.abs(x - knots[i]), knots[i - 1], knots[i])
    return np.where(np.abs(x - near) <= tol, near, x)


def residual_sup(ff: FractalFunction) -> float:
    """max over grid nodes of |g^a(y) - g(y) - a_p (g^a - b)(L_p^{-1}(y))|."""
    kernel = _RBKernel(ff.system, ff.depth)
    return float(np.max(np.abs(ff.values - kernel.apply(ff.values))))


def bound_grid(ff: FractalFunction) -> np.ndarray:
    """Sample grid joined with its preimages, where g - b is read by the operator."""
    kernel = _RBKernel(ff.system, ff.depth)
    return np.union1d(kernel.grid, kernel.u)


def perturbation_bound(g: ScalarFunction, b: ScalarFunction, alpha: ScalingVector, grid) -> float:
    """||a||/(1 - ||a||) * ||g - b||, sup norm taken over ``grid``."""
    s = alpha.sup_norm
    if s == 0.0:
        return 0.0
    grid = np.asarray(grid, dtype=float)
    return s / (1.0 - s) * float(np.max(np.abs(g(grid) - b(grid))))


def sup_deviation(ff: FractalFunction) -> float:
    return float(np.max(np.abs(ff.values - ff.system.g(ff.grid))))


def check_bound(ff: FractalFunction) -> bool:
    bound = perturbation_bound(ff.system.g, ff.system.b, ff.system.alpha, bound_grid(ff))
    return sup_deviation(ff) <= bound + BOUND_SLACK


def iteration_budget(ff_or_system, tol: float = DEFAULT_TOL, grid=None) -> int:
    """ceil(log(tol/||g-b||)/log||a||) + 2, the expected iteration ceiling."""
    system = ff_or_system.system if isinstance(ff_or_system, FractalFunction) else ff_or_system
    s = system.alpha.sup_norm
    if s == 0.0:
        return 1
    if grid is None:
        if isinstance(ff_or_system, FractalFunction):
            grid = bound_grid(ff_or_system)
        else:
            grid = dyadic_grid(system.data.partition, 8)
    gap = float(np.max(np.abs(system.g(grid) - system.b(grid))))
    if gap <= tol:
        return 2
    return math.ceil(math.log(tol / gap) / math.log(s)) + 2
