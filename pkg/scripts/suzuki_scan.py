"""Scan the two example maps under every contraction test and list the worst violations.

    python3 scripts/suzuki_scan.py [--delta 0.01]
"""
import argparse

from fiflab import contraction as ct


def show(label, rep, k=5):
    worst = sorted(rep.witnesses, key=lambda w: -w.slack)[:k]
    print(f"{label:<28} pairs={rep.sample_size:<9} violations={len(rep.witnesses)}")
    for w in worst:
        print(f"    ({w.y:g}, {w.z:g})  lhs={w.lhs:.4g}  rhs={w.rhs:.4g}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--delta", type=float, default=0.01)
    args = ap.parse_args()
    cont = ct.continuous_example((0.0, 12.0))
    show("continuous banach(1/2)", ct.check_banach(cont, args.delta))
    show("continuous phi=t/2", ct.check_phi(cont, ct.PHI_HALF, args.delta))
    show("continuous suzuki phi=t/2", ct.check_suzuki(cont, ct.PHI_HALF, args.delta))
    for sparse in (False, True):
        disc = ct.discrete_example(sparse_carrier=sparse)
        tag = "{0,2}+odd" if sparse else "{0..99}"
        show(f"discrete phi {tag}", ct.check_phi(disc, ct.PHI_PIECEWISE))
        show(f"discrete suzuki {tag}", ct.check_suzuki(disc, ct.PHI_PIECEWISE))


if __name__ == "__main__":
    main()
