"""Spinach case study: analytic and box-count dimensions for the four alpha settings.

    python3 scripts/reproduce_case_study.py --out runs/casestudy [--points 1000000]
"""
import argparse
import json
from pathlib import Path

from fiflab.cli import run_casestudy


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=Path("runs/casestudy"))
    ap.add_argument("--points", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    summary = run_casestudy(args.out, empirical=True, seed=args.seed, points=args.points)
    print(f"{'alpha':>6} {'analytic':>9} {'boxcount':>9} {'r2':>7} {'iters':>5} {'sup|g^a-g|':>11} {'bound':>7}")
    for e in summary["entries"]:
        bc = e["boxcount"]
        print(f"{e['name']:>6} {e['dimension']:9.5f} {bc['value']:9.4f} {bc['r2']:7.4f} "
              f"{e['iterations']:5d} {e['sup_dev']:11.4f} {e['bound']:7.3f}")
    print(json.dumps({"failures": summary["failures"], "out": str(args.out)}))


if __name__ == "__main__":
    main()
