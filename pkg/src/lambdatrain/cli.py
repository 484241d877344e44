"""Command-line interface: design, simulate, verify, sweep."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import analytic, oracle
from .designer import OverlapError, build_train
from .integrator import GridTooCoarseError, IntegratorConfig, evolve, extract_p2_max
from .model import PulseShape, TrainSpec
from .outputs import gnuplot_script, summarize, train_from_json, train_to_json, write_series_csv

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_USAGE = 2
EXIT_GRID = 3


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _angle_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad angle list {text!r}")


def _shape(kind: str, width: float) -> PulseShape:
    return PulseShape.rect(width) if kind == "rect" else PulseShape.gaussian(width)


def _design(args) -> TrainSpec:
    spacing = args.spacing if args.spacing is not None else 6.0 * args.width
    try:
        return build_train(
            args.pairs,
            _shape(args.shape, args.width),
            spacing,
            args.area,
            args.angles,
            gamma=args.gamma,
            dt=args.dt,
        )
    except OverlapError as exc:
        raise UsageError(f"{exc}")
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_design(args) -> int:
    train = _design(args)
    text = train_to_json(train)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _read_train(source: str) -> TrainSpec:
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
        return train_from_json(text)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read train {source!r}: {exc}")


def cmd_simulate(args) -> int:
    train = _read_train(args.train)
    if args.gamma is not None:
        train = train.with_gamma(args.gamma)
    dt = args.dt if args.dt is not None else train.grid.dt
    series = evolve(train, IntegratorConfig(dt=dt, record_stride=args.stride))
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            write_series_csv(series, fh)
    else:
        write_series_csv(series, sys.stdout)
    summary = summarize(series, train)
    text = json.dumps(summary, indent=2)
    if args.summary:
        Path(args.summary).write_text(text + "\n")
    else:
        print(text, file=sys.stderr if not args.out or args.out == "-" else sys.stdout)
    if args.gnuplot:
        csv_name = args.out if args.out and args.out != "-" else "series.csv"
        Path(args.gnuplot).write_text(gnuplot_script(csv_name, f"N = {len(train.pairs)}, gamma = {train.gamma:g}"))
    return EXIT_OK


def _check(name: str, ok: bool, detail: str) -> dict:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return {"check": name, "pass": bool(ok), "detail": detail}


def _angle_checks(checks: list, n: int, result) -> None:
    expected = analytic.mixing_angles(n)
    worst = max(abs(a - b) for a, b in zip(result.angles, expected))
    bound = analytic.p2_max_bound(n)
    shown = ", ".join(f"{a:.7f}" for a in result.angles)
    checks.append(_check("angles", worst <= result.cell * (1 + 1e-9),
                         f"[{shown}] off by {worst:.3g} (cell {result.cell:.3g})"))
    checks.append(_check("max_p2", abs(result.max_p2 - bound) <= 2 * result.cell * math.pi,
                         f"{result.max_p2:.6f} vs {bound:.6f}"))


def cmd_verify(args) -> int:
    n = args.pairs
    checks = []
    if args.claim == "p2max":
        peak = extract_p2_max(evolve(build_train(n, dt=args.dt)))
        bound = analytic.p2_max_bound(n)
        checks.append(_check("p2max", abs(peak.value - bound) <= 1e-3,
                             f"numeric {peak.value:.6f} vs sin^2(pi/4N) {bound:.6f} (tol 1e-3)"))
    elif args.claim == "optimal-angles":
        if n > oracle.MAX_SCAN_PAIRS:
            raise UsageError(f"optimal-angles supports at most {oracle.MAX_SCAN_PAIRS} pairs")
        grid_points = args.grid_points or (720 if n < 3 else 180)
        try:
            result = oracle.bruteforce_optimal_angles(n, grid_points)
        except oracle.InfeasibleGridError as exc:
            checks.append(_check("feasibility", False, str(exc)))
            result = None
        except ValueError as exc:
            raise UsageError(str(exc))
        if result is not None:
            _angle_checks(checks, n, result)
    elif args.claim == "crosscheck":
        report = oracle.crosscheck_analytic_numeric(n, args.dt)
        checks.append(_check("boundary populations", report.max_deviation < 1e-4,
                             f"max deviation {report.max_deviation:.3g} (tol 1e-4)"))
        checks.append(_check("p2 peak", report.p2_deviation <= 1e-3,
                             f"{report.p2_max_numeric:.6f} vs {report.p2_max_bound:.6f}"))
    else:
        report = oracle.crosscheck_analytic_numeric(n, args.dt)
        a = report.per_pair_p2_analytic
        m = report.per_pair_p2_numeric
        checks.append(_check("analytic equal maxima", max(a) - min(a) <= 1e-10, f"spread {max(a) - min(a):.3g}"))
        checks.append(_check("numeric equal maxima", max(m) - min(m) <= 1e-3, f"spread {max(m) - min(m):.3g}"))
    ok = all(c["pass"] for c in checks)
    print(json.dumps({"claim": args.claim, "pairs": n, "pass": ok, "checks": checks}, indent=2))
    return EXIT_OK if ok else EXIT_CLAIM_FAILED


def sweep_row(n: int, gamma: float, width: float, spacing: float, dt: float) -> tuple:
    train = build_train(n, PulseShape.gaussian(width), spacing, dt=dt)
    lossless = evolve(train)
    lossy = evolve(train.with_gamma(gamma)) if gamma > 0 else lossless
    return (
        n,
        analytic.p2_max_bound(n),
        extract_p2_max(lossless).value,
        float(lossless.P3[-1]),
        float(lossy.P3[-1]),
    )


def cmd_sweep(args) -> int:
    if args.pairs_to < args.pairs_from:
        raise UsageError("--pairs-to must not be below --pairs-from")
    ns = list(range(args.pairs_from, args.pairs_to + 1))
    spacing = args.spacing if args.spacing is not None else 6.0 * args.width
    dt = args.dt if args.dt is not None else args.width / 2000
    gamma = args.gamma / args.width
    job = [(n, gamma, args.width, spacing, dt) for n in ns]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(sweep_row, *zip(*job)))
    else:
        rows = [sweep_row(*j) for j in job]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["N", "p2_max_analytic", "p2_max_numeric", "final_P3_lossless", "final_P3_lossy"])
        for n, pa, pn, p3, p3l in rows:
            writer.writerow([n, f"{pa:.6f}", f"{pn:.6f}", f"{p3:.6f}", f"{p3l:.6f}"])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lambdatrain", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="print a train description as JSON")
    p.add_argument("--pairs", type=_positive_int, required=True)
    p.add_argument("--shape", choices=("gaussian", "rect"), default="gaussian")
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--spacing", type=float, default=None, help="center distance (default 6 widths)")
    p.add_argument("--area", type=float, default=2 * math.pi)
    p.add_argument("--angles", type=_angle_list, default=None, help="comma-separated mixing angles (rad)")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=None, help="time step (default width/2000)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="integrate a train and write a CSV time series")
    p.add_argument("--train", required=True, help="train JSON file, or - for stdin")
    p.add_argument("--gamma", type=float, default=None, help="loss rate (default: the train's own, 0 if absent)")
    p.add_argument("--dt", type=float, default=None, help="time step (default: the train's grid dt)")
    p.add_argument("--stride", type=_positive_int, default=1, help="record every k-th step")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--summary", default=None, help="summary JSON path")
    p.add_argument("--gnuplot", default=None, help="write a gnuplot script here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check a claim against its tolerance")
    p.add_argument("--claim", choices=("p2max", "optimal-angles", "crosscheck", "equal-maxima"), required=True)
    p.add_argument("--pairs", type=_positive_int, required=True)
    p.add_argument("--grid-points", type=int, default=None)
    p.add_argument("--dt", type=float, default=1 / 2000)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="tabulate peak P2 and final P3 against N")
    p.add_argument("--pairs-from", type=_positive_int, default=1)
    p.add_argument("--pairs-to", type=_positive_int, default=8)
    p.add_argument("--gamma", type=float, default=1.0, help="loss rate in units of 1/width")
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--spacing", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GridTooCoarseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
