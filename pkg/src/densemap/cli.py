"""Command line surface.

Subcommands: enumerate, locate, between, cantor, greedy, check.

Exit codes:
  0  success
  2  usage error (bad flags / arguments)
  3  invalid input (unparseable literal, malformed file, empty interval)
  4  budget exhaustion (search or refinement gave up)
  5  verification failure (replay mismatch or invariant violation)
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from gmpy2 import mpq

from . import errors
from .cantor import (
    DisjointIntervalFamily,
    ExplicitPoints,
    MappedCalkinWilf,
    cantor_assign,
)
from .enumeration import SelectionPolicy, index_of, nth_rational
from .greedy import run
from .rationals import format_rational, parse_rational
from .reals import RationalInterval, SurdStream, parse_real
from .traces import RunConfig, read_trace, replay_check, write_trace

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_BUDGET = 4
EXIT_CHECK = 5


def _out_path(path: str) -> str:
    """Resolve an output path; DENSEMAP_OUT_DIR overrides the directory."""
    base = os.environ.get("DENSEMAP_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _policy(name: str) -> SelectionPolicy:
    return SelectionPolicy(name)


def _cmd_enumerate(args) -> int:
    for n in range(args.start, args.start + args.count):
        print(f"{n},{format_rational(nth_rational(n))}")
    return EXIT_OK


def _cmd_locate(args) -> int:
    q = parse_rational(args.rational)
    print(index_of(q))
    return EXIT_OK


def _cmd_between(args) -> int:
    from .reals import rational_between

    a = parse_real(args.a)
    b = parse_real(args.b)
    print(format_rational(rational_between(a, b, args.refine_budget)))
    return EXIT_OK


def _cmd_cantor(args) -> int:
    with open(args.intervals) as fh:
        raw = json.load(fh)
    try:
        family = DisjointIntervalFamily([
            RationalInterval(parse_rational(lo), parse_rational(hi)) for lo, hi in raw
        ])
    except (TypeError, ValueError) as exc:
        raise errors.ParseError(f"bad interval file: {exc}") from exc
    if args.points == "cw":
        points = MappedCalkinWilf()
    else:
        with open(args.points) as fh:
            points = ExplicitPoints([parse_rational(s) for s in json.load(fh)])
    n = args.n if args.n is not None else len(family)
    assignment = cantor_assign(family, points, n, scan_budget=args.scan_budget)
    from .traces import encode_index

    for v, (kappa, point) in enumerate(zip(assignment.kappa, assignment.points)):
        print(json.dumps(
            {"v": v, "kappa": encode_index(kappa), "point": format_rational(point)},
            separators=(",", ":")))
    return EXIT_OK


def _cmd_greedy(args) -> int:
    stream = SurdStream(args.seed, count=args.stream_count)
    config = RunConfig(
        seed=args.seed,
        steps=args.steps,
        policy=_policy(args.policy),
        scan_budget=args.scan_budget,
        refine_budget=args.refine_budget,
        stream_params=stream.params(),
    )
    outcome = run(stream, config.steps, config.policy,
                  scan_budget=config.scan_budget, refine_budget=config.refine_budget)
    path = _out_path(args.out)
    with open(path, "w") as fh:
        write_trace(fh, outcome, config)
    print(f"{outcome.cause.value}: {len(outcome.trace)} steps -> {path}")
    return EXIT_OK


def _cmd_check(args) -> int:
    with open(getattr(args, "in")) as fh:
        trace = read_trace(fh)
    report = replay_check(trace)
    inv = report.invariants
    print(f"steps: {report.steps}")
    for msg in report.failures:
        print(f"FAIL {msg}")
    if inv is not None:
        for msg in inv.failures:
            print(f"FAIL {msg}")
        print(f"inversions: {inv.inversion_count}"
              + (f" (witness: steps {inv.inversion_witness.earlier_step}"
                 f"/{inv.inversion_witness.later_step})" if inv.inversion_witness else ""))
        if inv.properness_witness is not None:
            print(f"properness witness: {format_rational(inv.properness_witness)}")
    if report.ok:
        print("OK: trace replays bit-exactly and all invariants hold")
        return EXIT_OK
    return EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="densemap", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def _nonneg(text: str) -> int:
        v = int(text)
        if v < 0:
            raise argparse.ArgumentTypeError("must be >= 0")
        return v

    def _pos(text: str) -> int:
        v = int(text)
        if v <= 0:
            raise argparse.ArgumentTypeError("must be > 0")
        return v

    sp = sub.add_parser("enumerate", help="emit index,rational CSV rows")
    sp.add_argument("--from", dest="start", type=_nonneg, default=0)
    sp.add_argument("--count", type=_nonneg, required=True)
    sp.set_defaults(fn=_cmd_enumerate)

    sp = sub.add_parser("locate", help="index of a positive rational in the enumeration")
    sp.add_argument("rational")
    sp.set_defaults(fn=_cmd_locate)

    sp = sub.add_parser("between", help="a rational strictly between two reals")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--refine-budget", type=_pos, default=256)
    sp.set_defaults(fn=_cmd_between)

    sp = sub.add_parser("cantor", help="interval-to-point assignment")
    sp.add_argument("--intervals", required=True,
                    help='JSON file: list of ["lo","hi"] fraction pairs')
    sp.add_argument("--points", default="cw",
                    help='"cw" for the mapped enumeration, or a JSON file of points')
    sp.add_argument("--n", type=_pos, default=None)
    sp.add_argument("--scan-budget", type=_pos, default=1 << 22)
    sp.set_defaults(fn=_cmd_cantor)

    sp = sub.add_parser("greedy", help="run the greedy pairing, write a trace")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--steps", type=_nonneg, required=True)
    sp.add_argument("--policy", choices=[pol.value for pol in SelectionPolicy],
                    default="enum")
    sp.add_argument("--out", required=True)
    sp.add_argument("--scan-budget", type=_pos, default=1 << 22)
    sp.add_argument("--refine-budget", type=_pos, default=256)
    sp.add_argument("--stream-count", type=_pos, default=None,
                    help="truncate the irrational stream (default: unbounded)")
    sp.set_defaults(fn=_cmd_greedy)

    sp = sub.add_parser("check", help="replay-verify a trace file")
    sp.add_argument("--in", dest="in", required=True)
    sp.set_defaults(fn=_cmd_check)

    return p


def main(argv=None) -> int:
    # enumeration indices are exact big integers; lift the display guard
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(2_000_000)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except errors.BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (errors.DensemapError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
