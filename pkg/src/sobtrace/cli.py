"""Command line front end.

Exit codes: 0 success, 2 input validation error, 3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .experiments import counterexample_scenario, run_sweep
from .grid import NodeValidationError, make_nodes
from .interpolators import phi1, phi2
from .norms import (NormParams, TraceData, eq_norm_L_p, eq_norm_W_p, simp_norm_W_p)
from .oracle import oracle_L, oracle_W

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3


class InputError(ValueError):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def read_trace_csv(path: str | Path) -> TraceData:
    """Read a ``lambda,value`` CSV, reporting the offending line on failure."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    if header is None:
        raise InputError(f"{path}: empty file")
    if [h.strip() for h in header] != ["lambda", "value"]:
        raise InputError(f"{path}: line 1: expected header 'lambda,value', got {','.join(header)!r}")
    xs, ys, lines = [], [], []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise InputError(f"{path}: line {line}: expected 2 columns, got {len(row)}")
        try:
            x, y = float(row[0]), float(row[1])
        except ValueError:
            raise InputError(f"{path}: line {line}: non-numeric cell in {','.join(row)!r}") from None
        xs.append(x)
        ys.append(y)
        lines.append(line)
    if not xs:
        raise InputError(f"{path}: no data rows")
    try:
        nodes = make_nodes(xs)
    except NodeValidationError as exc:
        where = f"line {lines[exc.index]}: " if exc.index is not None else ""
        raise InputError(f"{path}: {where}{exc}") from None
    try:
        return TraceData(nodes, ys)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_norm(args) -> int:
    data = read_trace_csv(args.data)
    if args.which == "simp-w":
        if args.r != 2:
            raise InputError("simp-w is defined for r=2 only")
        power = simp_norm_W_p(data, args.p)
    else:
        params = NormParams(args.r, args.p, args.K)
        power = (eq_norm_L_p if args.which == "eq-l" else eq_norm_W_p)(data, params)
    value = power ** (1.0 / args.p)
    if args.format == "json":
        text = json.dumps({"which": args.which, "r": args.r, "p": args.p,
                           "value": value, "power": power}, sort_keys=True) + "\n"
    else:
        text = f"value,power\n{fmt(value)},{fmt(power)}\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_interp(args) -> int:
    data = read_trace_csv(args.data)
    if args.samples < 2:
        raise InputError("--samples must be >= 2")
    spline = phi1(data) if args.method == "phi1" else phi2(data)
    lo, hi = spline.domain
    xs = np.linspace(lo, hi, args.samples)
    xs[-1] = hi
    ys = spline(xs)
    lines = ["x,value"] + [f"{fmt(x)},{fmt(y)}" for x, y in zip(xs, ys)]
    _emit("\n".join(lines) + "\n", args.output)
    pieces = args.pieces
    if pieces is None and args.output:
        pieces = str(Path(args.output).with_suffix(".pieces.json"))
    if pieces:
        doc = {"method": args.method, **spline.to_dict()}
        Path(pieces).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_oracle(args) -> int:
    data = read_trace_csv(args.data)
    params = NormParams(args.r, args.p, args.K)
    if args.space == "L":
        res = oracle_L(data, params, args.grid, args.tol, method=args.method)
    else:
        res = oracle_W(data, params, args.grid, args.tol)
    doc = {"space": args.space, "r": args.r, "p": args.p, **res.to_dict(args.minimizer)}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.output)
    return EXIT_OK if res.converged else EXIT_SOLVER


def cmd_sweep(args) -> int:
    try:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{args.config}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.config}: line {exc.lineno}: {exc.msg}") from None
    report = run_sweep(config)
    _emit(report.to_csv(), args.output)
    json_path = args.json
    if json_path is None and args.output:
        json_path = str(Path(args.output).with_suffix(".json"))
    if json_path:
        Path(json_path).write_text(report.to_json(), encoding="utf-8")
    return EXIT_OK if all(rec.converged for rec in report.records) else EXIT_SOLVER


def cmd_counterexample(args) -> int:
    rec = counterexample_scenario(args.h, args.m, args.p, args.grid, r=args.r)
    _emit(json.dumps(rec, indent=2, sort_keys=True) + "\n", args.output)
    return EXIT_OK if rec["converged"] else EXIT_SOLVER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sobtrace",
        description="Equivalent trace norms of Sobolev spaces on node sequences "
                    "and their spline extensions.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, r_choices=(1, 2)):
        p.add_argument("--r", type=int, choices=r_choices, default=2)
        p.add_argument("--p", type=float, default=2.0)
        p.add_argument("--K", type=float, default=None, help="step bound")
        p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("norm", help="explicit equivalent norm of data")
    p.add_argument("data")
    p.add_argument("--which", choices=("eq-l", "eq-w", "simp-w"), default="eq-l")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("interp", help="sample Phi1 or Phi2")
    p.add_argument("data")
    p.add_argument("--method", choices=("phi1", "phi2"), default="phi2")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--pieces", default=None, help="piece-coefficient JSON path")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_interp)

    p = sub.add_parser("oracle", help="trace norm by direct minimization")
    p.add_argument("data")
    p.add_argument("--space", choices=("L", "W"), default="L")
    p.add_argument("--grid", type=int, default=64, help="grid cells per gap")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--method", choices=("auto", "exact_linear", "exact_natural_spline",
                                        "irls_grid"), default="auto")
    p.add_argument("--minimizer", action="store_true", help="include minimizer pieces")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="run a seeded sweep from a JSON config")
    p.add_argument("config")
    p.add_argument("-o", "--output", default=None, help="CSV report path")
    p.add_argument("--json", default=None, help="JSON aggregate path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("counterexample", help="clustered-node scenario")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--r", type=int, choices=(2,), default=2)
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
