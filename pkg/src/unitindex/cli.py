"""Command line entry point.

    unitindex unit D
    unitindex order D P
    unitindex sweep --m 10000 --workers 4 --out hist.csv [--checkpoint ck.json]
    unitindex report --mode table|expectation|theorem|convergence FILE [FILE ...]

Exit status: 0 ok, 1 usage error, 2 data or consistency failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import report
from .arith import build_tables, is_prime, legendre
from .orderfind import order_and_quotient
from .pell import FieldParams, cf_expand, fundamental_unit_exact, fundamental_unit_mod_p
from .sweep import CheckpointError, SweepConfig, read_output, read_range, run_sweep


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unitindex", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("unit", help="fundamental unit of Q(sqrt d)")
    p.add_argument("d", type=int)

    p = sub.add_parser("order", help="n(p) and the quotient q for one (d, p)")
    p.add_argument("d", type=int)
    p.add_argument("p", type=int)

    p = sub.add_parser("sweep", help="histograms of q over d, p ranges")
    p.add_argument("--m", type=int, help="shorthand for --d-max M --p-max M")
    p.add_argument("--d-max", type=int)
    p.add_argument("--p-max", type=int)
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--p-min", type=int, default=3)
    p.add_argument("--workers", type=int,
                   help="worker processes (default: $SWEEP_WORKERS or 1)")
    p.add_argument("--chunk-size", type=int, default=64)
    p.add_argument("--checkpoint", type=Path)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("report", help="render tables from sweep output files")
    p.add_argument("inputs", type=Path, nargs="+")
    p.add_argument("--mode", choices=["table", "expectation", "theorem", "convergence"],
                   default="table")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--cutoff", type=int, default=50)
    p.add_argument("--m", type=int, nargs="+",
                   help="range of each input, if not recorded next to the file")
    return parser


def _cmd_unit(args) -> None:
    params = FieldParams(args.d)
    unit = fundamental_unit_exact(params)
    period = cf_expand(params).period
    print(f"x={unit.x1} y={unit.y1} norm={unit.norm_sign:+d} period={period}")


def _cmd_order(args) -> None:
    d, p = args.d, args.p
    if p < 3 or not is_prime(p):
        raise ValueError(f"p={p} is not an odd prime")
    if d % p == 0:
        raise ValueError("p divides d")
    params = FieldParams(d)
    tables = build_tables(p + 1)
    res = order_and_quotient(fundamental_unit_mod_p(params, p), p, d, tables)
    print(f"ls={legendre(d, p):+d} q0={res.q0} n={res.n} q={res.q}")


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("SWEEP_WORKERS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SWEEP_WORKERS={env!r} is not an integer") from None
    return 1


def _cmd_sweep(args) -> None:
    d_max = args.d_max if args.d_max is not None else args.m
    p_max = args.p_max if args.p_max is not None else args.m
    if d_max is None or p_max is None:
        raise UsageError("give --m or both --d-max and --p-max")
    try:
        config = SweepConfig(
            d_min=args.d_min, d_max=d_max, p_min=args.p_min, p_max=p_max,
            workers=_workers(args), chunk_size=args.chunk_size,
            checkpoint_path=args.checkpoint, output_path=args.out,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = run_sweep(config)
    print(f"pairs={res.pairs} " + " ".join(f"S{j}={h.total}" for j, h in res.histograms.items())
          + f" wall={res.wall_time:.1f}s")


def _load_inputs(args):
    if args.m is not None and len(args.m) != len(args.inputs):
        raise UsageError("--m needs one value per input file")
    columns = []
    for i, path in enumerate(args.inputs):
        m = args.m[i] if args.m is not None else read_range(path)
        columns.append((m, read_output(path)))
    return columns


def _cmd_report(args) -> None:
    columns = _load_inputs(args)
    if args.mode == "table":
        if args.format == "csv":
            print(report.tables_csv(columns, args.top_k), end="")
        else:
            print(report.render_tables(columns, args.top_k), end="")
    elif args.mode == "expectation":
        lines = ["m,E,normalizer,ratio"] if args.format == "csv" else []
        for m, hs in columns:
            if m is None:
                raise UsageError("expectation needs the range m (--m)")
            e = report.expectation(hs[1], m)
            if args.format == "csv":
                lines.append(f"{e.m},{e.E:.6f},{e.normalizer:.6f},{e.ratio:.6f}")
            else:
                lines.append(f"m={e.m} E={e.E:.3f} log(m)*log(log(m))={e.normalizer:.3f} "
                             f"ratio={e.ratio:.3f}")
        print("\n".join(lines))
    elif args.mode == "theorem":
        failed = False
        for m, hs in columns:
            res = report.theorem_check(hs[4])
            print(f"[m={m}] " + res.summary())
            failed |= not res.passed
        if failed:
            raise ArithmeticError("q=4 observed in case 4")
    else:
        if any(m is None for m, _ in columns):
            raise UsageError("convergence needs the range m of every input (--m)")
        rows = report.convergence_report(columns, cutoff=args.cutoff)
        print(report.render_convergence(rows), end="")


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"unit": _cmd_unit, "order": _cmd_order,
               "sweep": _cmd_sweep, "report": _cmd_report}[args.command]
    try:
        handler(args)
    except UsageError as exc:
        print(f"unitindex: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, CheckpointError, OSError) as exc:
        print(f"unitindex: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
