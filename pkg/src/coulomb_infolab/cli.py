"""Command-line interface: reports, scans, figure data and validation.

Exit codes: 0 ok, 1 validation failure, 2 invalid configuration,
3 capacity error, 4 quadrature non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from . import bounds as bd
from . import measures as ms
from . import validation
from .errors import CapacityError, ConvergenceError, InvalidInputError

log = logging.getLogger("coulomb_infolab")

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_CAPACITY, EXIT_CONVERGENCE = 0, 1, 2, 3, 4

FIG4_STATES = (1, 2, 3, 5, 7)
FIG4_Q = tuple(x / 2 for x in range(3, 21))

FIGURE_COLUMNS = {
    1: ("n", "k_opt_shannon", "k_opt_complexity"),
    2: ("n", "S_n", "b(k_opt,n)"),
    3: ("n", "C_n", "c(k_opt,n)"),
    4: ("n", "q", "L_q^R"),
    5: ("n", "L_2^R", "L_5^R"),
    6: ("n", "L^S", "Δx", "L_2^R", "L_5^R", "δx"),
}
FIGURE_N = {1: range(1, 11), 2: range(1, 11), 3: range(1, 11), 4: FIG4_STATES, 5: range(1, 101),
            6: range(1, 51)}


def worker_count() -> int:
    raw = os.environ.get("COULOMB_INFOLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InvalidInputError(f"COULOMB_INFOLAB_THREADS must be an integer, got {raw!r}")


def ordered_map(fn, items):
    """Map over ``items`` with the configured worker count, preserving order."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- serialisation ----------------------------------------------------------

def fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def fmt_float(x) -> str:
    return format(float(x), ".17g")


def _qkey(q) -> str:
    return str(int(q)) if float(q).is_integer() else repr(float(q))


def report_to_dict(report: ms.StateReport) -> dict:
    moments = {}
    for q, value in report.moments.items():
        entry = {"approx": value, "z_power": float(q) - 1}
        if q in report.exact_moments:
            entry["exact"] = fraction_str(report.exact_moments[q])
        moments[_qkey(q)] = entry
    power = {}
    for k, value in report.power_moments.items():
        power[str(k)] = {"exact": fraction_str(report.exact_power_moments[k]), "approx": value, "z_power": -k}
    dis = report.disequilibrium
    out = {
        "n": report.n,
        "Z": report.Z,
        "moments": moments,
        "renyi": {_qkey(q): v for q, v in report.renyi.items()},
        "tsallis": {_qkey(q): v for q, v in report.tsallis.items()},
        "disequilibrium": {"exact": fraction_str(dis.exact), "approx": dis.approx, "z_power": 1},
        "linear_entropy": report.linear_entropy,
        "shannon": report.shannon,
        "complexity": report.complexity,
        "lengths": {
            "renyi": {_qkey(q): v for q, v in report.lengths.renyi.items()},
            "shannon": report.lengths.shannon,
            "fisher": report.lengths.fisher,
            "stddev": report.lengths.stddev,
        },
        "power_moments": power,
    }
    if report.bounds is not None:
        out["bounds"] = {name: dataclasses.asdict(b) for name, b in zip(("shannon", "complexity"), report.bounds)}
    return out


def flatten(d: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, name + "."))
        else:
            flat[name] = value
    return flat


def _csv_cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def rows_to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit(text: str, args, argv) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        meta = {
            "version": __version__,
            "argv": list(argv),
            "python": platform.python_version(),
            "created": datetime.now(timezone.utc).isoformat(),
            "threads": worker_count(),
        }
        with open(args.output + ".meta.json", "w", encoding="utf-8") as fh:
            fh.write(dump_json(meta))
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------

def build_report(n, z, q_list, k_list, k_max):
    state = ms.QuantumState(n, z)
    report = ms.state_report(state, q_list, k_list)
    if k_max:
        report = dataclasses.replace(report, bounds=bd.optimal_k(state, k_max))
    return report


def cmd_report(args, argv) -> int:
    report = build_report(args.n, args.Z, args.q, args.k, args.k_max)
    data = report_to_dict(report)
    if args.format == "json":
        emit(dump_json(data), args, argv)
    else:
        flat = flatten(data)
        emit(rows_to_csv(list(flat), [list(flat.values())]), args, argv)
    return EXIT_OK


def cmd_scan(args, argv) -> int:
    ns = parse_range(args.n_range)
    reports = ordered_map(lambda n: report_to_dict(build_report(n, args.Z, args.q, args.k, args.k_max)), ns)
    if args.format == "json":
        emit(dump_json({"reports": reports}), args, argv)
    else:
        flats = [flatten(r) for r in reports]
        columns = list(flats[0])
        emit(rows_to_csv(columns, [[f.get(c, "") for c in columns] for f in flats]), args, argv)
    return EXIT_OK


def figure_rows(fig: int, k_max: int = bd.DEFAULT_K_MAX, ns=None, q_grid=FIG4_Q) -> list:
    """Data rows for figure ``fig`` in the column order of FIGURE_COLUMNS."""
    ns = list(FIGURE_N[fig] if ns is None else ns)

    def one(n):
        st = ms.QuantumState(n)
        if fig == 1:
            sb, cb = bd.optimal_k(st, k_max)
            return [[n, sb.k, cb.k]]
        if fig == 2:
            sb, _ = bd.optimal_k(st, k_max)
            return [[n, ms.shannon_entropy(st), sb.shannon_bound]]
        if fig == 3:
            _, cb = bd.optimal_k(st, k_max)
            return [[n, ms.shape_complexity(st), cb.complexity_bound]]
        if fig == 4:
            return [[n, q, ms.renyi_length(st, q)] for q in q_grid]
        if fig == 5:
            return [[n, ms.renyi_length(st, 2), ms.renyi_length(st, 5)]]
        return [[n, ms.shannon_length(st), ms.standard_deviation(st), ms.renyi_length(st, 2),
                 ms.renyi_length(st, 5), ms.fisher_length(st)]]

    rows = []
    for chunk in ordered_map(one, ns):
        rows.extend(chunk)
    return rows


def cmd_figure(args, argv) -> int:
    if args.id not in FIGURE_COLUMNS:
        raise InvalidInputError(f"figure id must be one of 1..6, got {args.id}")
    ns = parse_range(args.n_range) if args.n_range else None
    q_grid = tuple(args.q) if args.q else FIG4_Q
    rows = figure_rows(args.id, args.k_max or bd.DEFAULT_K_MAX, ns, q_grid)
    columns = FIGURE_COLUMNS[args.id]
    if args.format == "csv":
        emit(rows_to_csv(columns, rows), args, argv)
    else:
        emit(dump_json({"figure": args.id, "columns": list(columns), "rows": rows}), args, argv)
    return EXIT_OK


def cmd_validate(args, argv) -> int:
    outcomes = validation.run_checks(args.only, args.tolerance)
    ok = all(o.passed for o in outcomes)
    if args.format == "json":
        payload = {"passed": ok, "checks": [dataclasses.asdict(o) for o in outcomes]}
        if args.observations:
            payload["observations"] = validation.observations()
        emit(dump_json(payload), args, argv)
    else:
        lines = [f"{'PASS' if o.passed else 'FAIL'}  {o.group:<15} {o.name:<30} {o.detail}" for o in outcomes]
        lines.append(f"{sum(o.passed for o in outcomes)}/{len(outcomes)} checks passed")
        if args.observations:
            lines.append(dump_json(validation.observations()).rstrip())
        emit("\n".join(lines) + "\n", args, argv)
    return EXIT_OK if ok else EXIT_VALIDATION


# -- argument parsing -----------------------------------------------------

def parse_range(text: str) -> list:
    """'a:b' (inclusive), 'a,b,c' or a single integer."""
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
            ns = list(range(lo, hi + 1))
        else:
            ns = [int(v) for v in text.split(",")]
    except ValueError:
        raise InvalidInputError(f"could not parse n range {text!r}")
    if not ns:
        raise InvalidInputError(f"n range {text!r} is empty")
    for n in ns:
        if n < 1:
            raise InvalidInputError(f"n must satisfy n >= 1, got {n}")
    return ns


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _renyi_q(text):
    value = _positive_float(text)
    if value == 1:
        raise argparse.ArgumentTypeError("q = 1 is the Shannon limit; Rényi/Tsallis need q != 1")
    return int(value) if value.is_integer() else value


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coulomb-infolab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default):
        p.add_argument("--Z", type=_positive_float, default=1.0, help="nuclear charge (default 1)")
        p.add_argument("--q", type=_renyi_q, nargs="+", default=[2, 3], help="Rényi/Tsallis orders")
        p.add_argument("--k", type=int, nargs="+", default=[1, 2], help="power-moment orders")
        p.add_argument("--k-max", type=int, default=bd.DEFAULT_K_MAX, help="bound search window (0 skips bounds)")
        p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        p.add_argument("--output", "-o", help="write here instead of stdout (adds a .meta.json sidecar)")

    p = sub.add_parser("report", help="all measures for one state")
    p.add_argument("--n", type=int, required=True)
    common(p, "json")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("scan", help="reports over a range of n")
    p.add_argument("--n-range", required=True, help="'a:b' inclusive or comma list")
    common(p, "csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("figure", help="data series behind figures 1-6")
    p.add_argument("id", type=int, choices=sorted(FIGURE_COLUMNS))
    p.add_argument("--n-range", help="override the figure's default n values")
    p.add_argument("--q", type=_renyi_q, nargs="+", help="q grid for figure 4")
    p.add_argument("--k-max", type=int, default=bd.DEFAULT_K_MAX)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("validate", help="run the invariant suite")
    p.add_argument("--only", nargs="+", help=f"groups or check names; groups: {', '.join(validation.GROUPS)}")
    p.add_argument("--tolerance", type=_positive_float, help="override the quadrature comparison tolerance")
    p.add_argument("--observations", action="store_true", help="also print non-gating crossover data")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = make_parser()
    args = parser.parse_args(argv)  # argparse exits with 2 on malformed flags
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if getattr(args, "n", None) is not None and args.n < 1:
            raise InvalidInputError(f"n must satisfy n >= 1, got {args.n}")
        if getattr(args, "k_max", 0) and args.k_max < 0:
            raise InvalidInputError("k-max must be >= 0")
        return args.func(args, argv)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
