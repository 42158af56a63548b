"""RB iteration behaviour: iterations, contraction ratios and knot stability versus alpha and depth.

    python3 scripts/convergence_study.py
"""
import numpy as np

from fiflab import ScalingVector, construct_alpha_fif, linear_interpolant, square_base
from fiflab.data_io import normalize_series, spinach_fixture
from fiflab.fif import eval_fif, iteration_budget


def main():
    data = normalize_series(spinach_fixture())
    g = linear_interpolant(data)
    b = square_base(g)
    knots = np.asarray(data.ys)
    print(f"{'alpha':>5} {'depth':>5} {'iters':>5} {'budget':>6} {'max ratio':>9} {'knot err':>9} {'eval-grid':>9}")
    for a in (0.2, 0.4, 0.6, 0.8, 0.9):
        for depth in (6, 8, 10, 12):
            ff = construct_alpha_fif(data, g, b, ScalingVector.uniform(a, 10), depth=depth)
            r = ff.ratios()
            r = r[2:][np.isfinite(r[2:])]
            knot_err = np.max(np.abs(ff.samples(knots) - data.zs))
            # recursive evaluation vs grid samples on a subsample of nodes
            idx = np.linspace(0, len(ff.grid) - 1, 257).astype(int)
            drift = np.max(np.abs(eval_fif(ff, ff.grid[idx]) - ff.values[idx]))
            print(f"{a:5.2f} {depth:5d} {ff.iterations_used:5d} {iteration_budget(ff):6d} "
                  f"{(r.max() if len(r) else 0):9.4f} {knot_err:9.1e} {drift:9.1e}")


if __name__ == "__main__":
    main()
