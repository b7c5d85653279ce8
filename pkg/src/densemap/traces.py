"""JSON-lines trace files and their independent replay verification.

Format "densemap-trace/1": one header record (config echo, including the
stream generator name and seed so the run is reproducible from the file
alone), one body record per step, one footer record (termination cause and
summary statistics).  Every number is a canonical fraction string, never a
float, so exactness survives serialization; identical configs produce
byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TextIO

from gmpy2 import mpq

from .errors import TraceFormatError
from .enumeration import SelectionPolicy, first_in_interval
from .greedy import (
    Cause,
    InvariantReport,
    PairRecord,
    RunOutcome,
    check_invariants,
    largest_below,
)
from .rationals import Rational, format_rational, parse_rational
from .reals import DEFAULT_REFINE_BUDGET, RationalInterval, format_surd, parse_surd
from .greedy import DEFAULT_ENCLOSURE_WIDTH

FORMAT_VERSION = "densemap-trace/1"

# enumeration indices can be astronomically large (thin gaps live deep in the
# tree); huge ones are serialized as hex strings to stay exact and compact
_PLAIN_INT_LIMIT = 1 << 53


def encode_index(i: int):
    return i if i < _PLAIN_INT_LIMIT else hex(i)


def decode_index(v) -> int:
    if isinstance(v, int):
        return v
    if isinstance(v, str) and v.startswith("0x"):
        return int(v, 16)
    raise TraceFormatError(f"bad enumeration index {v!r}")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce a greedy run bit for bit."""

    seed: int
    steps: int
    policy: SelectionPolicy = SelectionPolicy.ENUMERATION_ORDER
    scan_budget: int = 1 << 22
    refine_budget: int = DEFAULT_REFINE_BUDGET
    stream_params: dict | None = None

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if self.scan_budget <= 0 or self.refine_budget <= 0:
            raise ValueError("budgets must be > 0")

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "steps": self.steps,
            "policy": self.policy.value,
            "scan_budget": self.scan_budget,
            "refine_budget": self.refine_budget,
            "stream": self.stream_params or {},
        }


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _record_to_json(r: PairRecord) -> dict:
    return {
        "kind": "step",
        "step": r.step,
        "xi": format_surd(r.xi),
        "q_floor": format_rational(r.q_floor),
        "q_assigned": format_rational(r.q_assigned),
        "enum_index": encode_index(r.enum_index),
        "gap_lo": format_rational(r.q_floor),
        "gap_hi_enclosure": [
            format_rational(r.xi_enclosure.lo),
            format_rational(r.xi_enclosure.hi),
        ],
    }


def write_trace(out: TextIO, outcome: RunOutcome, config: RunConfig) -> None:
    header = {"kind": "header", "format": FORMAT_VERSION, "config": config.as_dict()}
    out.write(_dumps(header) + "\n")
    for r in outcome.trace:
        out.write(_dumps(_record_to_json(r)) + "\n")
    stats = dict(outcome.stats)
    if "min_gap_lower_bound" in stats:
        stats["min_gap_lower_bound"] = format_rational(stats["min_gap_lower_bound"])
    if "max_enum_index" in stats:
        stats["max_enum_index"] = encode_index(stats["max_enum_index"])
    footer = {
        "kind": "footer",
        "cause": outcome.cause.value,
        "steps": len(outcome.trace),
        "stats": stats,
    }
    out.write(_dumps(footer) + "\n")


@dataclass
class ParsedTrace:
    config: RunConfig
    steps: list[dict]
    footer: dict


def read_trace(inp: TextIO) -> ParsedTrace:
    lines = [ln for ln in inp.read().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise TraceFormatError("trace needs at least a header and a footer record")
    try:
        records = [json.loads(ln) for ln in lines]
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"trace is not valid JSON lines: {exc}") from exc
    header, body, footer = records[0], records[1:-1], records[-1]
    if header.get("kind") != "header" or header.get("format") != FORMAT_VERSION:
        raise TraceFormatError(f"unsupported or missing header: {header}")
    if footer.get("kind") != "footer":
        raise TraceFormatError("last record is not a footer")
    cfg = header.get("config", {})
    try:
        config = RunConfig(
            seed=cfg["seed"],
            steps=cfg["steps"],
            policy=SelectionPolicy(cfg["policy"]),
            scan_budget=cfg["scan_budget"],
            refine_budget=cfg["refine_budget"],
            stream_params=cfg.get("stream") or None,
        )
    except (KeyError, ValueError) as exc:
        raise TraceFormatError(f"bad config in header: {exc}") from exc
    for i, rec in enumerate(body):
        if rec.get("kind") != "step":
            raise TraceFormatError(f"body record {i} is not a step record")
    return ParsedTrace(config=config, steps=body, footer=footer)


@dataclass
class ReplayReport:
    steps: int
    failures: list[str] = field(default_factory=list)
    invariants: InvariantReport | None = None

    @property
    def ok(self) -> bool:
        return not self.failures and (self.invariants is None or self.invariants.ok)


def replay_check(trace: ParsedTrace) -> ReplayReport:
    """Re-derive every step from its recorded inputs and re-check invariants.

    Each q_assigned is recomputed by running the interval search again from
    the recorded q_floor and xi; any deviation from the recorded value, index
    or enclosure is a failure naming the step.  Traces are self-contained:
    nothing outside the file is consulted.
    """
    report = ReplayReport(steps=len(trace.steps))
    config = trace.config
    q_sorted: list[Rational] = [mpq(0)]
    records: list[PairRecord] = []
    from bisect import insort

    for rec in trace.steps:
        step = rec.get("step")
        try:
            xi = parse_surd(rec["xi"])
            q_floor = parse_rational(rec["q_floor"])
            q_assigned = parse_rational(rec["q_assigned"])
            enum_index = decode_index(rec["enum_index"])
            enc_lo, enc_hi = (parse_rational(s) for s in rec["gap_hi_enclosure"])
            gap_lo = parse_rational(rec["gap_lo"])
        except Exception as exc:
            report.failures.append(f"step {step}: unreadable record ({exc})")
            continue

        # round-trip identity of every fraction string
        for key, raw, val in (("q_floor", rec["q_floor"], q_floor),
                              ("q_assigned", rec["q_assigned"], q_assigned)):
            if format_rational(val) != raw:
                report.failures.append(f"step {step}: {key} is not canonical: {raw}")
        if rec["xi"] != format_surd(xi):
            report.failures.append(f"step {step}: xi is not canonical: {rec['xi']}")
        if gap_lo != q_floor:
            report.failures.append(f"step {step}: gap_lo disagrees with q_floor")

        derived_floor = largest_below(q_sorted, xi, config.refine_budget)
        if derived_floor != q_floor:
            report.failures.append(
                f"step {step}: q_floor {format_rational(q_floor)} is not the largest "
                f"Q member below xi (expected {format_rational(derived_floor)})"
            )
        derived_q, derived_index = first_in_interval(
            q_floor, xi, config.policy,
            max_steps=config.scan_budget, refine_budget=config.refine_budget,
        )
        if derived_q != q_assigned or derived_index != enum_index:
            report.failures.append(
                f"step {step}: recorded ({format_rational(q_assigned)}, {enum_index}) "
                f"!= re-derived ({format_rational(derived_q)}, {derived_index})"
            )
        derived_enc = xi.refine_to(DEFAULT_ENCLOSURE_WIDTH, max_steps=config.refine_budget)
        if (derived_enc.lo, derived_enc.hi) != (enc_lo, enc_hi):
            report.failures.append(f"step {step}: enclosure does not replay bit-exactly")

        records.append(PairRecord(
            step=step, xi=xi, q_floor=q_floor, q_assigned=q_assigned,
            enum_index=enum_index,
            xi_enclosure=RationalInterval(enc_lo, enc_hi),
        ))
        insort(q_sorted, q_assigned)

    if trace.footer.get("steps") != len(trace.steps):
        report.failures.append(
            f"footer step count {trace.footer.get('steps')} != body records "
            f"{len(trace.steps)}"
        )
    try:
        cause = Cause(trace.footer.get("cause"))
    except ValueError:
        report.failures.append(f"footer has unknown cause {trace.footer.get('cause')!r}")
        cause = Cause.BUDGET_EXHAUSTED

    outcome = RunOutcome(cause=cause, trace=records, policy=config.policy, stats={})
    report.invariants = check_invariants(outcome, config.refine_budget)
    return report
