"""The greedy irrational-to-rational pairing, instrumented and budget-bounded.

Starting from Q = {0}, each step takes the next irrational xi from a stream,
finds the largest member of Q below xi, picks the first enumerated rational
strictly between the two, and records the pair.  Every run terminates for an
observable reason: the step budget ran out, the stream ended, or a search
budget tripped.  "The rationals ran out" is modelled as an outcome cause that
is asserted unreachable — between the floor element and xi there is always a
rational, and it is always new to Q.
"""

from __future__ import annotations

import enum
import time
from bisect import insort
from dataclasses import dataclass, field
from typing import Iterable

from gmpy2 import mpq

from .errors import DuplicateIrrationalError, NonPositiveRationalError, SearchBudgetExceededError
from .enumeration import EnumIndex, SelectionPolicy, first_in_interval
from .rationals import Ordering, Rational
from .reals import (
    ComputableReal,
    QuadraticSurd,
    RationalInterval,
    compare_reals,
    compare_to_rational,
)

DEFAULT_ENCLOSURE_WIDTH = mpq(1, 1 << 16)


@dataclass(frozen=True)
class PairRecord:
    """One completed step: xi paired with its assigned rational."""

    step: int  # 1-based
    xi: ComputableReal
    q_floor: Rational
    q_assigned: Rational
    enum_index: EnumIndex
    xi_enclosure: RationalInterval


@dataclass
class GreedyState:
    """The evolving (Q, X) pair; Q always keeps the 0 sentinel."""

    q_sorted: list[Rational] = field(default_factory=lambda: [mpq(0)])
    q_members: set = field(default_factory=lambda: {mpq(0)})
    records: list[PairRecord] = field(default_factory=list)
    step: int = 0

    def card_q(self) -> int:
        return len(self.q_sorted)

    def card_x(self) -> int:
        return len(self.records)


class Cause(enum.Enum):
    BUDGET_EXHAUSTED = "BudgetExhausted"
    SOURCE_STREAM_ENDED = "SourceStreamEnded"
    RATIONALS_EXHAUSTED = "RationalsExhausted"
    SEARCH_BUDGET_ERROR = "SearchBudgetError"


@dataclass
class RunOutcome:
    cause: Cause
    trace: list[PairRecord]
    policy: SelectionPolicy
    stats: dict
    error: SearchBudgetExceededError | None = None
    elapsed_seconds: float = 0.0  # in-memory only, never serialized


def largest_below(q_sorted: list[Rational], xi: ComputableReal,
                  refine_budget: int = 256) -> Rational:
    """max{q in Q : q < xi}; exists because 0 is in Q and xi > 0.

    Binary search over the sorted members, one irrational comparison per probe.
    """
    lo, hi = 0, len(q_sorted)  # invariant: q_sorted[:lo] < xi <= q_sorted[hi:]
    while lo < hi:
        mid = (lo + hi) // 2
        if compare_to_rational(xi, q_sorted[mid], refine_budget) is Ordering.GREATER:
            lo = mid + 1
        else:
            hi = mid
    if lo == 0:
        raise NonPositiveRationalError("xi is not above any member of Q (xi <= 0?)")
    return q_sorted[lo - 1]


def _xi_key(xi: ComputableReal):
    if isinstance(xi, QuadraticSurd):
        return (xi.shift, xi.coeff, xi.radicand)
    return id(xi)


def greedy_step(state: GreedyState, xi: ComputableReal,
                policy: SelectionPolicy = SelectionPolicy.ENUMERATION_ORDER, *,
                scan_budget: int = 1 << 22,
                refine_budget: int = 256,
                _seen_keys: set | None = None) -> PairRecord:
    """Process one irrational: pick its rational, grow Q, record the pair.

    The assigned rational is automatically fresh: every Q member at or below
    q_floor is outside (q_floor, xi) by construction, every other Q member
    exceeds xi by maximality of q_floor.
    """
    if isinstance(xi, QuadraticSurd) and not xi.is_positive():
        raise NonPositiveRationalError("stream values must be positive irrationals")
    key = _xi_key(xi)
    if _seen_keys is not None:
        if key in _seen_keys:
            raise DuplicateIrrationalError(f"irrational fed twice: {xi}")
        _seen_keys.add(key)
    elif any(_xi_key(r.xi) == key for r in state.records):
        raise DuplicateIrrationalError(f"irrational fed twice: {xi}")

    q_floor = largest_below(state.q_sorted, xi, refine_budget)
    q_assigned, enum_index = first_in_interval(
        q_floor, xi, policy, max_steps=scan_budget, refine_budget=refine_budget
    )
    enclosure = xi.refine_to(DEFAULT_ENCLOSURE_WIDTH, max_steps=refine_budget)
    state.step += 1
    record = PairRecord(
        step=state.step,
        xi=xi,
        q_floor=q_floor,
        q_assigned=q_assigned,
        enum_index=enum_index,
        xi_enclosure=enclosure,
    )
    insort(state.q_sorted, q_assigned)
    state.q_members.add(q_assigned)
    state.records.append(record)
    return record


def run(stream: Iterable[ComputableReal], budget: int,
        policy: SelectionPolicy = SelectionPolicy.ENUMERATION_ORDER, *,
        scan_budget: int = 1 << 22,
        refine_budget: int = 256) -> RunOutcome:
    """Apply greedy_step up to `budget` times and report why the run stopped."""
    if budget < 0:
        raise ValueError("budget must be >= 0")
    state = GreedyState()
    seen: set = set()
    started = time.monotonic()
    error = None
    cause = Cause.BUDGET_EXHAUSTED
    it = iter(stream)
    while state.step < budget:
        try:
            xi = next(it)
        except StopIteration:
            cause = Cause.SOURCE_STREAM_ENDED
            break
        try:
            greedy_step(state, xi, policy, scan_budget=scan_budget,
                        refine_budget=refine_budget, _seen_keys=seen)
        except SearchBudgetExceededError as exc:
            cause = Cause.SEARCH_BUDGET_ERROR
            error = exc
            break
    elapsed = time.monotonic() - started
    return RunOutcome(
        cause=cause,
        trace=state.records,
        policy=policy,
        stats=_run_stats(state),
        error=error,
        elapsed_seconds=elapsed,
    )


def _run_stats(state: GreedyState) -> dict:
    """Empirical signature of the run: gap widths and enumeration-index growth."""
    if not state.records:
        return {"steps": 0, "final_q_size": state.card_q()}
    max_index = max(r.enum_index for r in state.records)
    # lower bound on the thinnest gap searched: enclosure floor minus q_floor
    min_gap = min(r.xi_enclosure.lo - r.q_floor for r in state.records)
    return {
        "steps": len(state.records),
        "final_q_size": state.card_q(),
        "max_enum_index": max_index,
        "min_gap_lower_bound": min_gap,
    }


@dataclass
class InversionWitness:
    earlier_step: int
    later_step: int


@dataclass
class InvariantReport:
    """Machine-checked finite-stage facts about a completed run."""

    steps: int
    injective: bool
    fresh: bool
    sandwich: bool
    floor_maximal: bool
    cardinality: bool  # |Q| = |X| + 1 at every prefix (0 sentinel counted)
    pair_count: int  # |X|, i.e. |Q| without the sentinel
    non_exhausted: bool
    properness_witness: Rational | None
    properness_ok: bool
    inversion_count: int
    inversion_witness: InversionWitness | None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_invariants(outcome: RunOutcome, refine_budget: int = 256) -> InvariantReport:
    """Verify every prefix invariant of a run and survey its inversions.

    Inversions (xi_i < xi_j but q_i > q_j) are expected findings, not
    failures: the pairing is injective but deliberately not order preserving.
    """
    trace = outcome.trace
    failures: list[str] = []

    assigned = [r.q_assigned for r in trace]
    injective = len(set(assigned)) == len(assigned)
    if not injective:
        failures.append("injectivity: some rational was assigned twice")

    fresh = True
    floor_maximal = True
    cardinality = True
    q_so_far: set = {mpq(0)}
    q_sorted: list[Rational] = [mpq(0)]
    for r in trace:
        if r.q_assigned in q_so_far:
            fresh = False
            failures.append(f"freshness: step {r.step} reassigned a member of Q")
        if largest_below(q_sorted, r.xi, refine_budget) != r.q_floor:
            floor_maximal = False
            failures.append(f"floor: step {r.step} q_floor is not max below xi")
        q_so_far.add(r.q_assigned)
        insort(q_sorted, r.q_assigned)
        if len(q_so_far) != r.step + 1:
            cardinality = False
            failures.append(f"cardinality: |Q| != |X| + 1 after step {r.step}")

    sandwich = True
    for r in trace:
        if not r.q_floor < r.q_assigned:
            sandwich = False
            failures.append(f"sandwich: step {r.step} q_assigned <= q_floor")
        if compare_to_rational(r.xi, r.q_assigned, refine_budget) is not Ordering.GREATER:
            sandwich = False
            failures.append(f"sandwich: step {r.step} q_assigned >= xi")

    non_exhausted = outcome.cause is not Cause.RATIONALS_EXHAUSTED
    if not non_exhausted:
        failures.append("exhaustion: run claims the rationals ran out")

    properness_witness = None
    properness_ok = True
    if len(q_sorted) >= 2:
        # adjacent members leave a gap free of Q; its midpoint witnesses that
        # final Q misses rationals between its own members
        a, b = q_sorted[0], q_sorted[1]
        properness_witness = (a + b) / 2
        properness_ok = (a < properness_witness < b
                         and properness_witness not in q_so_far)
        if not properness_ok:
            failures.append("properness: constructed witness is not strictly between "
                            "adjacent members of Q or already belongs to Q")

    inversion_count, inversion_witness = _count_inversions(trace, refine_budget)

    return InvariantReport(
        steps=len(trace),
        injective=injective,
        fresh=fresh,
        sandwich=sandwich,
        floor_maximal=floor_maximal,
        cardinality=cardinality,
        pair_count=len(trace),
        non_exhausted=non_exhausted,
        properness_witness=properness_witness,
        properness_ok=properness_ok,
        inversion_count=inversion_count,
        inversion_witness=inversion_witness,
        failures=failures,
    )


def _count_inversions(trace: list[PairRecord],
                      refine_budget: int) -> tuple[int, InversionWitness | None]:
    """Count pairs ordered oppositely by xi and by assigned rational.

    Sort the steps by xi (exact real comparison), then count inversions of
    the q_assigned sequence with a mergesort; O(n log n) comparisons.
    """
    n = len(trace)
    if n < 2:
        return 0, None
    import functools

    def cmp(i: int, j: int) -> int:
        return compare_reals(trace[i].xi, trace[j].xi, refine_budget).value

    by_xi = sorted(range(n), key=functools.cmp_to_key(cmp))
    seq = [trace[i].q_assigned for i in by_xi]
    steps = [trace[i].step for i in by_xi]

    witness = None
    for k in range(n - 1):  # first adjacent inversion as the witness
        if seq[k] > seq[k + 1]:
            witness = InversionWitness(earlier_step=min(steps[k], steps[k + 1]),
                                       later_step=max(steps[k], steps[k + 1]))
            break

    def count(a: list) -> tuple[list, int]:
        if len(a) <= 1:
            return a, 0
        mid = len(a) // 2
        left, cl = count(a[:mid])
        right, cr = count(a[mid:])
        merged, i, j, c = [], 0, 0, cl + cr
        while i < len(left) and j < len(right):
            if left[i] <= right[j]:
                merged.append(left[i])
                i += 1
            else:
                merged.append(right[j])
                j += 1
                c += len(left) - i
        merged.extend(left[i:])
        merged.extend(right[j:])
        return merged, c

    _, total = count(seq)
    return total, witness
