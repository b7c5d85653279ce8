"""Order-preserving assignment of dense-sequence points to disjoint intervals.

Given a finite family of pairwise disjoint intervals inside (0,1) and a dense
sequence of distinct points of (0,1), each interval receives the first point
of the sequence whose left/right pattern relative to the already chosen
points equals the interval's left/right pattern relative to the earlier
intervals.  Because the partial assignment is an order isomorphism, that
pattern pins the candidate into one gap between chosen points, and "first
matching point" means "least index inside that gap".

The default point sequence maps the positive-rational enumeration into (0,1)
via q -> q/(q+1); it is dense by construction and admits an exact O(bits)
least-index query, so assignments never stall.  Arbitrary point lists are
supported with a linear scan and a budget: exhausting the budget is the
diagnostic for a sequence that is not actually dense.
"""

from __future__ import annotations

import enum
from bisect import bisect_left, insort
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import (
    OverlappingIntervalsError,
    SearchBudgetExceededError,
    SignatureClashError,
)
from .enumeration import EnumIndex, index_of, nth_rational, simplest_in_interval
from .rationals import Rational, format_rational
from .reals import RationalInterval

DEFAULT_POINT_SCAN_BUDGET = 1 << 22


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"


@dataclass(frozen=True)
class DisjointIntervalFamily:
    """Finite list of pairwise disjoint intervals, all strictly inside (0,1).

    Disjointness is strict on closed hulls (touching endpoints rejected), so
    left/right between any two intervals is total.  Presentation order is
    arbitrary and preserved.
    """

    intervals: tuple[RationalInterval, ...]

    def __init__(self, intervals: Sequence[RationalInterval]):
        object.__setattr__(self, "intervals", tuple(intervals))
        for iv in self.intervals:
            if not (iv.lo > 0 and iv.hi < 1):
                raise OverlappingIntervalsError(
                    f"interval ({format_rational(iv.lo)}, {format_rational(iv.hi)}) "
                    "is not strictly inside (0,1)"
                )
        by_lo = sorted(self.intervals, key=lambda iv: iv.lo)
        for a, b in zip(by_lo, by_lo[1:]):
            if not a.hi < b.lo:
                raise OverlappingIntervalsError(
                    f"intervals ({format_rational(a.lo)}, {format_rational(a.hi)}) and "
                    f"({format_rational(b.lo)}, {format_rational(b.hi)}) are not "
                    "strictly disjoint"
                )

    def __len__(self) -> int:
        return len(self.intervals)

    def left_of(self, v: int, mu: int) -> bool:
        """Does interval v lie entirely left of interval mu?"""
        return self.intervals[v].hi <= self.intervals[mu].lo


class DensePointSequence:
    """Indexed sequence of distinct points of (0,1); density is a caller contract."""

    def point(self, i: EnumIndex) -> Rational:
        raise NotImplementedError

    def least_index_in(self, lo: Rational, hi: Rational, *,
                       scan_budget: int = DEFAULT_POINT_SCAN_BUDGET) -> EnumIndex:
        """Least i with lo < point(i) < hi."""
        raise NotImplementedError


class MappedCalkinWilf(DensePointSequence):
    """The positive-rational enumeration squashed into (0,1) by q -> q/(q+1)."""

    def point(self, i: EnumIndex) -> Rational:
        q = nth_rational(i)
        return q / (q + 1)

    def least_index_in(self, lo: Rational, hi: Rational, *,
                       scan_budget: int = DEFAULT_POINT_SCAN_BUDGET) -> EnumIndex:
        # preimage of the gap under the order isomorphism q -> q/(q+1)
        a = lo / (1 - lo)
        b = None if hi >= 1 else hi / (1 - hi)
        q = simplest_in_interval(a, b, max_steps=scan_budget)
        return index_of(q)


class ExplicitPoints(DensePointSequence):
    """A finite, explicitly listed point sequence (e.g. read from a file)."""

    def __init__(self, points: Sequence[Rational]):
        self.points = list(points)

    def point(self, i: EnumIndex) -> Rational:
        return self.points[i]

    def least_index_in(self, lo: Rational, hi: Rational, *,
                       scan_budget: int = DEFAULT_POINT_SCAN_BUDGET) -> EnumIndex:
        for i, p in enumerate(self.points):
            if i >= scan_budget:
                break
            if lo < p < hi:
                return i
        raise SearchBudgetExceededError(
            f"no listed point inside ({format_rational(lo)}, {format_rational(hi)}) "
            f"within the first {min(len(self.points), scan_budget)} points "
            "(sequence not dense enough?)",
            progress=min(len(self.points), scan_budget),
        )


@dataclass
class CantorAssignment:
    """Chosen point indices kappa[v], aligned with interval positions 0..n-1."""

    kappa: list[EnumIndex] = field(default_factory=list)
    points: list[Rational] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.kappa)


def position_signature(candidate: Rational, chosen: Sequence[Rational]) -> list[Side]:
    """Left/right of the candidate relative to each chosen point, in order."""
    sig = []
    for p in chosen:
        if candidate == p:
            raise SignatureClashError(
                f"candidate {format_rational(candidate)} equals a chosen point"
            )
        sig.append(Side.LEFT if candidate < p else Side.RIGHT)
    return sig


def interval_signature(v: int, family: DisjointIntervalFamily) -> list[Side]:
    """Left/right of interval v relative to each earlier interval (0-based)."""
    return [
        Side.LEFT if family.left_of(v, mu) else Side.RIGHT
        for mu in range(v)
    ]


def cantor_assign(family: DisjointIntervalFamily, points: DensePointSequence,
                  n: int, *,
                  scan_budget: int = DEFAULT_POINT_SCAN_BUDGET) -> CantorAssignment:
    """Assign the first n intervals to points, preserving relative position.

    For each interval, the chosen point is the least-index point of the
    sequence whose position signature against the already chosen points
    matches the interval's signature against the earlier intervals.
    """
    if n > len(family):
        raise ValueError(f"family has only {len(family)} intervals, asked for {n}")
    assignment = CantorAssignment()
    # chosen points keyed by their interval's left endpoint, kept sorted
    order: list[tuple[Rational, Rational]] = []  # (interval.lo, chosen point)
    for v in range(n):
        iv = family.intervals[v]
        pos = bisect_left(order, (iv.lo, mpq(0)))
        gap_lo = order[pos - 1][1] if pos > 0 else mpq(0)
        gap_hi = order[pos][1] if pos < len(order) else mpq(1)
        kappa = points.least_index_in(gap_lo, gap_hi, scan_budget=scan_budget)
        chosen = points.point(kappa)
        assignment.kappa.append(kappa)
        assignment.points.append(chosen)
        insort(order, (iv.lo, chosen))
    return assignment


def check_order_isomorphism(assignment: CantorAssignment,
                            family: DisjointIntervalFamily) -> bool:
    """Exhaustive O(n^2) check: point order matches interval order for all pairs."""
    n = len(assignment)
    pts = assignment.points
    for v in range(n):
        for mu in range(v):
            if (pts[v] < pts[mu]) != family.left_of(v, mu):
                return False
    return True


def verify_minimality(family: DisjointIntervalFamily, points: DensePointSequence,
                      assignment: CantorAssignment, v: int, *,
                      scan_cap: int | None = None) -> bool:
    """Re-scan: no index below kappa[v] matches interval v's signature.

    Uses the literal signature definitions, independent of the gap shortcut
    in cantor_assign.  `scan_cap` bounds the re-scan for huge indices.
    """
    target = interval_signature(v, family)
    chosen_before = assignment.points[:v]
    used = set(assignment.kappa[:v])
    limit = assignment.kappa[v] if scan_cap is None else min(assignment.kappa[v], scan_cap)
    for i in range(limit):
        if i in used:
            continue
        p = points.point(i)
        if not (0 < p < 1):
            continue
        # literal signature comparison, bailing at the first differing side
        matches = True
        for side, q in zip(target, chosen_before):
            if p == q or (Side.LEFT if p < q else Side.RIGHT) is not side:
                matches = False
                break
        if matches:
            return False
    # the chosen point itself must match
    return position_signature(assignment.points[v], chosen_before) == target
