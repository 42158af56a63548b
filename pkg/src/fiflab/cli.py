"""fiflab command line.

Exit codes: 0 success, 2 usage error, 3 counterexamples found, 4 data
validation failure, 5 reproduction assertion failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import contraction as ct
from .core import InterpolationData, ScalingVector, linear_interpolant, literal_square_base, PiecewiseLinear, square_base
from .data_io import (
    SvgStyle,
    dumps_json,
    export_cloud_csv,
    export_report_json,
    export_samples_csv,
    export_svg,
    figure1_fixture,
    load_price_csv,
    load_xy_csv,
    normalize_series,
    spinach_fixture,
)
from .dimension import estimate_box_dimension, fif_dimension
from .errors import DataValidationError, FifError
from .expr import ExprError, compile_expr
from .fif import FractalFunction, check_bound, construct_alpha_fif
from .ifs import build_ifs, chaos_game, deterministic_attractor

EXIT_OK, EXIT_USAGE, EXIT_COUNTEREXAMPLE, EXIT_DATA, EXIT_REPRO = 0, 2, 3, 4, 5

MIXED_ALPHA = (0.1, 0.2, 0.5, 0.2, 0.4, 0.2, 0.4, 0.2, 0.3, 0.1)
# Case-study dimensions as printed (two decimals, truncated)
PUBLISHED_DIMS = {"0.4": 1.60, "0.6": 1.77, "mixed": 1.41}

log = logging.getLogger("fiflab")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- argument helpers


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if not hi > lo:
        raise argparse.ArgumentTypeError("range must satisfy lo < hi")
    return lo, hi


def _int_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected kmin:kmax, got {text!r}") from None
    return lo, hi


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _alpha_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def _add_build_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--data", type=Path, help="CSV with header label,min,max,avg (or y,z)")
    src.add_argument("--fixture", choices=["spinach", "figure1"], help="built-in dataset (default spinach)")
    al = p.add_mutually_exclusive_group()
    al.add_argument("--alpha", type=float, help="uniform vertical scaling factor (default 0.4)")
    al.add_argument("--alpha-list", type=_alpha_list, help="one scaling factor per interval, comma separated")
    p.add_argument("--base", choices=["square", "paper-square", "file"],
                   help="base function: g(psi(y)) with endpoint-fixing psi (default), g(y^2) literally "
                        "(default for figure1), or samples from --base-file")
    p.add_argument("--base-file", type=Path, help="y,z CSV sampling the base function")
    p.add_argument("--depth", type=int, default=10, help="dyadic grid depth per interval (default 10)")
    p.add_argument("--tol", type=_positive_float, default=1e-10, help="RB iteration tolerance (default 1e-10)")
    p.add_argument("--max-iter", type=_positive_int, default=200)
    p.add_argument("--out", default="fif", help="output path prefix (default fif)")
    p.add_argument("--svg", action="store_true", help="also write an SVG plot")


@dataclass
class Setup:
    name: str
    data: InterpolationData
    alpha: ScalingVector
    g: object
    b: object


def _load_data(args) -> tuple[str, InterpolationData]:
    if args.data is not None:
        try:
            head = args.data.read_text(encoding="utf-8").splitlines()[:1]
        except OSError as exc:
            raise DataValidationError(f"cannot read {args.data}: {exc}") from exc
        except UnicodeDecodeError as exc:
            raise DataValidationError(f"{args.data} is not UTF-8") from exc
        if head and head[0].strip().replace(" ", "") == "y,z":
            ys, zs = load_xy_csv(args.data)
            return args.data.stem, InterpolationData(tuple(ys), tuple(zs))
        return args.data.stem, normalize_series(load_price_csv(args.data))
    if args.fixture == "figure1":
        return "figure1", figure1_fixture()
    return "spinach", normalize_series(spinach_fixture())


def _setup(args) -> Setup:
    name, data = _load_data(args)
    if args.alpha_list is not None:
        if len(args.alpha_list) != data.P:
            raise UsageError(f"--alpha-list has {len(args.alpha_list)} entries, data has {data.P} intervals")
        alpha = ScalingVector.of(args.alpha_list)
    else:
        alpha = ScalingVector.uniform(0.4 if args.alpha is None else args.alpha, data.P)
    g = linear_interpolant(data)
    base = args.base or ("paper-square" if name == "figure1" else "square")
    if base == "square":
        b = square_base(g)
    elif base == "paper-square":
        b = literal_square_base(g)
    else:
        if args.base_file is None:
            raise UsageError("--base file requires --base-file")
        ys, zs = load_xy_csv(args.base_file)
        b = PiecewiseLinear.through(ys, zs)
    if args.depth < 1 or args.depth > 16:
        raise UsageError("--depth must lie in 1..16")
    return Setup(name, data, alpha, g, b)


def _build(s: Setup, args) -> FractalFunction:
    return construct_alpha_fif(s.data, s.g, s.b, s.alpha, depth=args.depth, tol=args.tol, max_iter=args.max_iter)


# ---------------------------------------------------------------- subcommands


def cmd_check(args) -> tuple[int, str]:
    if args.map == "t-continuous":
        T = ct.continuous_example(args.domain)
    elif args.map == "t-discrete":
        T = ct.discrete_example(args.carrier_max, sparse_carrier=args.sparse_carrier)
    else:
        if not args.map_expr:
            raise UsageError("--map expr requires --map-expr")
        T = ct.MetricSelfMap(compile_expr(args.map_expr), args.domain, "expr")
    phi_name = args.phi or ("piecewise" if args.map == "t-discrete" else "half")
    if phi_name == "half":
        phi = ct.PHI_HALF
    elif phi_name == "piecewise":
        phi = ct.PHI_PIECEWISE
    else:
        if not args.phi_expr:
            raise UsageError("--phi expr requires --phi-expr")
        phi = ct.ContractionModulus(compile_expr(args.phi_expr), "expr")
    if args.mode == "banach":
        report = ct.check_banach(T, args.delta, args.ratio, args.tol)
    elif args.mode == "phi":
        report = ct.check_phi(T, phi, args.delta, args.tol)
    else:
        report = ct.check_suzuki(T, phi, args.delta, args.tol)
    doc = report.to_dict()
    doc["map"] = T.name
    doc["phi"] = phi.name if args.mode != "banach" else None
    doc["violation_count"] = len(report.witnesses)
    if args.max_witnesses is not None:
        doc["witnesses"] = doc["witnesses"][: args.max_witnesses]
    leaks = T.image_violations(T.sample(args.delta)[0])
    if len(leaks):
        doc["carrier_leaks"] = leaks.tolist()
    return (EXIT_COUNTEREXAMPLE if report.found else EXIT_OK), dumps_json(doc)


def _write_build(ff: FractalFunction, s: Setup, args, prefix: str) -> dict:
    meta = ff.metadata()
    meta["bound_holds"] = check_bound(ff)
    meta["dataset"] = s.name
    meta["interpolation_error"] = float(np.max(np.abs(ff(np.asarray(s.data.ys)) - np.asarray(s.data.zs))))
    export_samples_csv(ff, f"{prefix}_samples.csv")
    export_report_json(meta, f"{prefix}_meta.json")
    if args.svg:
        label = ",".join(f"{a:g}" for a in s.alpha.alphas) if len(set(s.alpha.alphas)) > 1 else f"{s.alpha.alphas[0]:g}"
        export_svg(np.column_stack([ff.grid, ff.values]), f"{prefix}.svg", SvgStyle(title=f"{s.name} alpha={label}"))
    return meta


def cmd_build(args) -> tuple[int, str]:
    s = _setup(args)
    ff = _build(s, args)
    meta = _write_build(ff, s, args, args.out)
    return EXIT_OK, dumps_json(meta)


def _render(s: Setup, args):
    system = build_ifs(s.data, s.alpha, s.g, s.b)
    if args.method == "chaos":
        return chaos_game(system, args.points, burn_in=args.burn_in, seed=args.seed)
    return deterministic_attractor(system, iterations=args.iterations, cap=args.points)


def cmd_render(args) -> tuple[int, str]:
    s = _setup(args)
    cloud = _render(s, args)
    export_cloud_csv(cloud, f"{args.out}_cloud.csv")
    meta = {"dataset": s.name, "alpha": list(s.alpha.alphas), "method": args.method, "points": len(cloud),
            "seed": args.seed, "bounding_box": list(cloud.bounding_box)}
    if args.method == "deterministic":
        meta["iterations"] = args.iterations
    export_report_json(meta, f"{args.out}_render.json")
    if args.svg:
        export_svg(cloud.points, f"{args.out}_cloud.svg", SvgStyle(title=f"{s.name} attractor"), points=True)
    return EXIT_OK, dumps_json(meta)


def cmd_dim(args) -> tuple[int, str]:
    s = _setup(args)
    doc = {"dataset": s.name, "alpha": list(s.alpha.alphas), "analytic": fif_dimension(s.data, s.alpha)}
    if args.empirical:
        kmin, kmax = args.k_range
        system = build_ifs(s.data, s.alpha, s.g, s.b)
        cloud = chaos_game(system, args.points, burn_in=args.burn_in, seed=args.seed)
        doc["boxcount"] = estimate_box_dimension(cloud, kmin, kmax)
        doc["seed"] = args.seed
    return EXIT_OK, dumps_json(doc)


def run_casestudy(out: Path, depth: int = 10, tol: float = 1e-10, empirical: bool = False,
                  seed: int = 42, points: int = 1_000_000) -> dict:
    """Build the four spinach configurations and collect their diagnostics."""
    out.mkdir(parents=True, exist_ok=True)
    data = normalize_series(spinach_fixture())
    g = linear_interpolant(data)
    b = square_base(g)
    configs = [("0.4", ScalingVector.uniform(0.4, 10)), ("0.6", ScalingVector.uniform(0.6, 10)),
               ("mixed", ScalingVector.of(MIXED_ALPHA)), ("0.0", ScalingVector.uniform(0.0, 10))]
    entries, failures = [], []
    for name, alpha in configs:
        ff = construct_alpha_fif(data, g, b, alpha, depth=depth, tol=tol)
        dim = fif_dimension(data, alpha)
        entry = {"name": name, "alpha": list(alpha.alphas), "classical": alpha.is_zero,
                 "dimension": dim.value, **ff.metadata(), "bound_holds": check_bound(ff),
                 "interpolation_error": float(np.max(np.abs(ff(np.asarray(data.ys)) - np.asarray(data.zs))))}
        if name in PUBLISHED_DIMS:
            closed = 1.0 + math.log10(alpha.abs_sum)
            entry["closed_form"] = closed
            entry["published_value"] = PUBLISHED_DIMS[name]
            ok = abs(dim.value - closed) <= 1e-3 and math.floor(dim.value * 100) / 100 == PUBLISHED_DIMS[name]
            entry["matches_published"] = ok
            if not ok:
                failures.append(name)
        if empirical:
            system = build_ifs(data, alpha, g, b)
            entry["boxcount"] = estimate_box_dimension(chaos_game(system, points, seed=seed)).to_dict()
        export_samples_csv(ff, out / f"alpha_{name}_samples.csv")
        export_svg(np.column_stack([ff.grid, ff.values]), out / f"alpha_{name}.svg",
                   SvgStyle(title=f"spinach alpha={name}"))
        entries.append(entry)
    summary = {"dataset": "spinach", "depth": depth, "tol": tol, "entries": entries,
               "dims": [e["dimension"] for e in entries if e["name"] in PUBLISHED_DIMS],
               "failures": failures}
    export_report_json(summary, out / "summary.json")
    return summary


def cmd_casestudy(args) -> tuple[int, str]:
    summary = run_casestudy(args.out, depth=args.depth, tol=args.tol, empirical=args.empirical,
                            seed=args.seed, points=args.points)
    code = EXIT_REPRO if summary["failures"] else EXIT_OK
    return code, dumps_json({"dims": summary["dims"], "failures": summary["failures"],
                             "summary": str(args.out / "summary.json")})


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fiflab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="scan a map for contraction-condition counterexamples",
                       description="Scan ordered pairs of a sampled carrier. Expressions (--map-expr, --phi-expr) "
                                   "use numbers, y (or t), + - * / and parentheses, plus "
                                   "'if a<=y<=b then E else E'.")
    p.add_argument("--map", choices=["t-continuous", "t-discrete", "expr"], required=True)
    p.add_argument("--map-expr", help="map body, e.g. 'if y<=4 then 0 else y/2'")
    p.add_argument("--phi", choices=["half", "piecewise", "expr"])
    p.add_argument("--phi-expr", help="modulus body in t, e.g. 't/3'")
    p.add_argument("--mode", choices=["banach", "phi", "suzuki"], required=True)
    p.add_argument("--domain", type=_range, default=(0.0, 12.0), help="interval carrier lo:hi (default 0:12)")
    p.add_argument("--delta", type=_positive_float, default=ct.DEFAULT_DELTA, help="scan resolution (default 0.01)")
    p.add_argument("--ratio", type=float, default=0.5, help="Banach ratio bound (default 0.5)")
    p.add_argument("--tol", type=_positive_float, default=ct.DEFAULT_TOL)
    p.add_argument("--carrier-max", type=int, default=ct.DISCRETE_CARRIER_MAX,
                   help="t-discrete carrier is {0..N} (default 99)")
    p.add_argument("--sparse-carrier", action="store_true",
                   help="t-discrete: scan {0,2} plus odd numbers instead of {0..N}")
    p.add_argument("--max-witnesses", type=int)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("build", help="construct an alpha-fractal interpolation function")
    _add_build_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("render", help="render the IFS attractor as a point cloud")
    _add_build_flags(p)
    p.add_argument("--method", choices=["chaos", "deterministic"], default="chaos")
    p.add_argument("--points", type=_positive_int, default=100_000, help="cloud size / decimation cap")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--burn-in", type=int, default=100)
    p.add_argument("--iterations", type=_positive_int, default=10, help="deterministic rounds (default 10)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("dim", help="box dimension of the FIF graph")
    _add_build_flags(p)
    p.add_argument("--empirical", action="store_true", help="add a box-count estimate from a chaos-game cloud")
    p.add_argument("--k-range", type=_int_range, default=(3, 9))
    p.add_argument("--points", type=_positive_int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--burn-in", type=int, default=100)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("casestudy", help="reproduce the spinach price case study")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--tol", type=_positive_float, default=1e-10)
    p.add_argument("--empirical", action="store_true")
    p.add_argument("--points", type=_positive_int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_casestudy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code, text = args.func(args)
    except DataValidationError as exc:
        print(f"fiflab: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (UsageError, ExprError, FifError) as exc:
        print(f"fiflab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
