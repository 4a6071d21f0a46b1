"""Command-line front end: ``combwalk {simulate,density,domain,experiment}``.

Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 gated check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from combwalk.coupling import sample_coupled_path
from combwalk.densities import MODELS, DensityModel, cdf_table, local_time_laplace
from combwalk.experiments import EXPERIMENTS, RATE_PRESETS, ExperimentPlan
from combwalk.limitset import LIL_SCALE, DomainSpec, d2_contains, trace_boundary
from combwalk.rng import RngStream
from combwalk.walk import sample_comb_path

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_GATE = 0, 1, 2, 3
SEED_ENV = "COMBWALK_SEED"


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_table(base: Path, fmt: str, columns, rows) -> Path:
    """Write ``rows`` as ``base.csv`` or ``base.json``; floats keep 17 significant digits."""
    base.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path = base.with_suffix(".json")
        data = {"columns": list(columns), "rows": [[_jsonval(v) for v in r] for r in rows]}
        path.write_text(json.dumps(data, indent=1) + "\n")
        return path
    path = base.with_suffix(".csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
    return path


def _jsonval(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def _grid(text: str) -> np.ndarray:
    try:
        a, b, h = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like a:b:h, got {text!r}")
    if not (h > 0 and b > a):
        raise argparse.ArgumentTypeError("grid needs b > a and h > 0")
    m = int(round((b - a) / h))
    if abs(a + m * h - b) > 1e-9 * max(1.0, abs(b)):
        raise argparse.ArgumentTypeError("grid step must divide b - a")
    return np.round(a + h * np.arange(m + 1), 12)


def _scale(text: str) -> float:
    if text == "lil":
        return LIL_SCALE
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"scale must be a number or 'lil', got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError("scale must be positive")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help=f"u64 seed (default 0; ${SEED_ENV} overrides)")
    common.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1,
                        help="worker threads (default: available cores); never changes output")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory (default .)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="table format (default csv)")

    parser = argparse.ArgumentParser(prog="combwalk", description="Random walk on the comb lattice.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="dump one sampled path")
    p.add_argument("--n", type=int, default=1000, help="number of steps (default 1000)")
    p.add_argument("--coupled", action="store_true", help="use the two-walk coupling construction")

    p = sub.add_parser("density", parents=[common], help="tabulate a limit density and its CDF")
    p.add_argument("--model", required=True, help=f"one of {', '.join(MODELS + ('laplace',))}")
    p.add_argument("--grid", type=_grid, default="-4:4:0.01", help="a:b:h (default -4:4:0.01)")
    p.add_argument("--z", type=float, default=0.0, help="slice level for the two-variable models")
    p.add_argument("--theta", type=float, nargs="+", default=[1.0], help="laplace: theta values")
    p.add_argument("--t", type=float, default=1.0, help="laplace: time (default 1)")

    p = sub.add_parser("domain", parents=[common], help="trace or query the limit-point domain")
    p.add_argument("--trace", action="store_true", help="write the boundary polyline (default action)")
    p.add_argument("--points", type=int, default=256, help="boundary points per quadrant (>= 16)")
    p.add_argument("--query", type=float, nargs=2, metavar=("U", "V"), help="print membership of (U, V)")
    p.add_argument("--scale", type=_scale, default=1.0,
                   help="first-coordinate factor; 'lil' applies 2^(3/4)")

    p = sub.add_parser("experiment", parents=[common], help="run a Monte Carlo check")
    p.add_argument("--id", required=True, dest="experiment", help=f"one of {', '.join(EXPERIMENTS)}")
    p.add_argument("--n", type=_positive_int, help="horizon")
    p.add_argument("--R", type=_positive_int, help="replicas")
    p.add_argument("--n-max", type=_positive_int, help="horizon for lil / chung-hirsch")
    p.add_argument("--theta", type=float, nargs="+", help="laplace: theta values")
    p.add_argument("--beta", nargs="+", help=f"chung-hirsch: rate presets ({', '.join(RATE_PRESETS)})")
    p.add_argument("--timing", action="store_true", help="record wall-clock duration in the report")
    return parser


def cmd_simulate(args) -> int:
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    rng = RngStream(args.seed)
    if args.coupled:
        cp = sample_coupled_path(args.n, rng)
        names = ("axis", "tooth")
        rows = [(i, x, y, names[k], ph) for i, (x, y, k, ph) in
                enumerate(zip(cp.path.xs.tolist(), cp.path.ys.tolist(), cp.kind.tolist(), cp.phase.tolist()))]
        out = write_table(args.out / "coupled_path", args.format, ["step", "x", "y", "phase", "N"], rows)
        path = cp.path
    else:
        path = sample_comb_path(args.n, rng)
        rows = [(i, x, y) for i, (x, y) in enumerate(zip(path.xs.tolist(), path.ys.tolist()))]
        out = write_table(args.out / "path", args.format, ["step", "x", "y"], rows)
    x, y = path.endpoint
    on_axis = int(np.count_nonzero(path.ys[1:] == 0))
    print(f"n={args.n} endpoint=({x},{y}) steps_on_axis={on_axis} file={out}")
    return EXIT_OK


def cmd_density(args) -> int:
    if args.model == "laplace":
        if args.t <= 0 or any(th <= 0 for th in args.theta):
            raise UsageError("laplace needs positive --theta and --t")
        rows = [(th, args.t, local_time_laplace(th, args.t)) for th in args.theta]
        out = write_table(args.out / "density_laplace", args.format, ["theta", "t", "value"], rows)
        for th, t, v in rows:
            print(f"theta={th:g} t={t:g} value={_fmt(v)}")
        print(f"file={out}")
        return EXIT_OK
    if args.model not in MODELS:
        raise UsageError(f"unknown model {args.model!r}; choose from {', '.join(MODELS + ('laplace',))}")
    model = DensityModel(args.model, z=args.z)
    table = cdf_table(model, args.grid)
    rows = list(zip(table.points.tolist(), table.density.tolist(), table.cdf.tolist()))
    out = write_table(args.out / f"density_{args.model}", args.format, ["point", "density", "cdf"], rows)
    print(f"model={args.model} points={len(rows)} cdf_last={_fmt(table.cdf[-1])} file={out}")
    return EXIT_OK


def cmd_domain(args) -> int:
    if args.points < 16:
        raise UsageError("--points must be at least 16")
    if args.query is not None:
        u, v = args.query
        print("true" if d2_contains(u / args.scale, v) else "false")
        if not args.trace:
            return EXIT_OK
    poly = trace_boundary(DomainSpec(), args.points)
    us, vs = poly.four_quadrants()
    rows = [(a * args.scale + 0.0, b + 0.0) for a, b in zip(us.tolist(), vs.tolist())]
    out = write_table(args.out / "domain_boundary", args.format, ["u", "v"], rows)
    print(f"points={len(rows)} scale={_fmt(args.scale)} file={out}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    eid = args.experiment
    if eid not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {eid!r}; choose from {', '.join(EXPERIMENTS)}")
    asymptotic = eid in ("lil", "chung-hirsch")
    params = {}
    if args.n_max is not None:
        if not asymptotic:
            raise UsageError("--n-max applies to lil and chung-hirsch only")
        params["n_max"] = args.n_max
    if args.theta is not None:
        if eid != "laplace":
            raise UsageError("--theta applies to laplace only")
        params["thetas"] = tuple(args.theta)
    if args.beta is not None:
        if eid != "chung-hirsch":
            raise UsageError("--beta applies to chung-hirsch only")
        unknown = [b for b in args.beta if b not in RATE_PRESETS]
        if unknown:
            raise UsageError(f"unknown rate presets {unknown}; choose from {', '.join(RATE_PRESETS)}")
        params["rates"] = [RATE_PRESETS[b] for b in args.beta]
    plan = ExperimentPlan(eid, seed=args.seed, n=args.n, R=args.R, params=params, threads=args.threads)
    report = plan.run()
    args.out.mkdir(parents=True, exist_ok=True)
    tables = report.tables
    if args.format == "csv":
        report.tables = {}
        for name, tab in tables.items():
            write_table(args.out / f"{eid}_{name}", "csv", tab["columns"], tab["rows"])
    (args.out / f"{eid}.json").write_text(report.to_json(timing=args.timing))
    report.tables = tables
    print(report.summary())
    if args.timing:
        print(f"duration_ms={report.duration_ms:.1f}", file=sys.stderr)
    return EXIT_OK if report.all_passed else EXIT_GATE


COMMANDS = {"simulate": cmd_simulate, "density": cmd_density, "domain": cmd_domain, "experiment": cmd_experiment}


def _join_grid(argv: list[str]) -> list[str]:
    # "--grid -4:4:0.01" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--grid":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--grid={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_grid(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            args.seed = _seed(env)
        except argparse.ArgumentTypeError as exc:
            print(f"combwalk: {SEED_ENV}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"combwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report any runtime failure as exit 1
        print(f"combwalk: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
