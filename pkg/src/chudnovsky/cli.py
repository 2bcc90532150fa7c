"""Command-line entry point.

Exit status: 0 on success, 1 when a verification or table check fails, 2 on
usage errors and invalid inputs.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .bounds import bound_report
from .compiler import compile_algorithm, export_json, import_json
from .errors import ChudnovskyError
from .field_core import format_poly, parse_poly, parse_qspec
from .places import count_places, enumerate_places
from .report import plot_bounds, plot_table, rows_to_csv, table_rows
from .runtime import ExtElement, multiply, verify
from .strategy import DEFAULT_UMAX, build_spec, point_cost


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _modulus(text):
    if text is None:
        return None
    return [int(s) for s in text.split(",")]


def _field(args):
    return parse_qspec(args.q, _modulus(args.modulus))


def _Q(field, text):
    return None if text is None else parse_poly(field, text)


def cmd_places(args, out):
    field = _field(args)
    for place in enumerate_places(field, args.d):
        out.write(place.wire() + "\n")
    return 0


def cmd_count(args, out):
    field = _field(args)
    out.write("d,B_d\n")
    for d in range(1, args.dmax + 1):
        out.write(f"{d},{count_places(field, d)}\n")
    return 0


def cmd_spec(args, out):
    field = _field(args)
    spec = build_spec(field, args.n, args.strategy, args.umax)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["place", "u", "weight", "cost"])
    for pt in spec.points:
        place = "inf" if pt.is_lead else pt.place.wire()
        w.writerow([place, pt.u, pt.weight, point_cost(pt, spec.strategy, field.q, args.umax)])
    out.write(f"# weight={spec.weight} cost={spec.cost()}\n")
    return 0


def cmd_compile(args, out):
    if args.n < 2:
        raise _UsageError("compile: n must be >= 2")
    field = _field(args)
    alg = compile_algorithm(field, args.n, args.strategy, Q=_Q(field, args.Q), umax=args.umax)
    text = export_json(alg)
    if args.output:
        Path(args.output).write_text(text + "\n")
        out.write(f"wrote {args.output} bilinear_count={alg.bilinear_count} Q={format_poly(alg.Q)}\n")
    else:
        out.write(text + "\n")
    return 0


def cmd_mul(args, out):
    alg = import_json(Path(args.algorithm).read_text())
    x = ExtElement.from_poly(alg.Q, parse_poly(alg.field, args.x))
    y = ExtElement.from_poly(alg.Q, parse_poly(alg.field, args.y))
    z, trace = multiply(alg, x, y)
    out.write(f"{z}\n")
    out.write(f"bilinear_count={trace.total}\n")
    return 0


def cmd_verify(args, out):
    if args.n < 2:
        raise _UsageError("verify: n must be >= 2")
    field = _field(args)
    report = verify(field, args.n, args.strategy, trials=args.trials, seed=args.seed,
                    umax=args.umax, Q=_Q(field, args.Q))
    for line in report.lines():
        out.write(line + "\n")
    return 0 if report.passed else 1


def cmd_table(args, out):
    field = _field(args)
    try:
        rows = table_rows(field.q, args.nmin, args.nmax, args.strategy, args.umax)
    except ValueError as exc:
        raise _UsageError(f"table: {exc}") from exc
    text = rows_to_csv(rows)
    if args.output:
        Path(args.output).write_text(text)
    out.write(text)
    for r in rows:
        if r.improvement:
            sys.stderr.write(f"improvement: q={r.q} n={r.n} {r.strategy} count {r.count} "
                             f"< reference {r.reference}\n")
    if args.figure:
        plot_table(rows, args.figure)
    return 1 if any(r.match is False for r in rows) else 0


def cmd_bound(args, out):
    field = _field(args)
    if args.n < 2:
        raise _UsageError("bound: n must be >= 2")
    report = bound_report(field.q, args.n)
    if args.json:
        out.write(json.dumps(report.as_dict(), sort_keys=True) + "\n")
    else:
        out.write(report.text() + "\n")
    if args.figure:
        plot_bounds(field.q, args.n, args.figure)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chudnovsky",
                     description="Interpolation-based multiplication algorithms over F_q[x]/(Q).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, n_arg=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("q", help='field size as "p", "p^m" or a prime power')
        if n_arg:
            p.add_argument("n", type=int, help="extension degree")
        p.add_argument("--modulus", help="comma-separated F_p digits of the modulus, low to high")
        p.set_defaults(func=func)
        return p

    def strategy_opts(p, default="deg"):
        p.add_argument("--strategy", choices=["deg", "div", "opt"], default=default)
        p.add_argument("--umax", type=int, default=DEFAULT_UMAX)

    p = add("places", cmd_places, "list places of a given degree", n_arg=False)
    p.add_argument("d", type=int)
    p = add("count", cmd_count, "number of places per degree", n_arg=False)
    p.add_argument("dmax", type=int)
    strategy_opts(add("spec", cmd_spec, "show the interpolation points"))
    p = add("compile", cmd_compile, "compile an algorithm to JSON")
    strategy_opts(p)
    p.add_argument("-Q", help="reduction polynomial in wire format")
    p.add_argument("-o", "--output")
    p = sub.add_parser("mul", help="multiply two elements with a compiled algorithm")
    p.add_argument("algorithm")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_mul)
    p = add("verify", cmd_verify, "check against schoolbook multiplication")
    strategy_opts(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-Q", help="reduction polynomial in wire format")
    p = add("table", cmd_table, "bilinear counts over a range of n", n_arg=False)
    p.add_argument("nmin", type=int)
    p.add_argument("nmax", type=int)
    strategy_opts(p)
    p.add_argument("-o", "--output", help="also write the CSV here")
    p.add_argument("--figure", help="save a plot of the counts (png, pdf, svg)")
    p = add("bound", cmd_bound, "compare counts with the lower and upper bounds")
    p.add_argument("--json", action="store_true")
    p.add_argument("--figure", help="save a plot of counts and bounds up to n")
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except _UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    except (ChudnovskyError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


cmd_dispatch = main


if __name__ == "__main__":
    sys.exit(main())
