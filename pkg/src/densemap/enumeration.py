"""The fixed enumeration of the positive rationals and interval search.

The canonical order is the Calkin-Wilf sequence: breadth-first traversal of
the binary tree rooted at 1/1 where a/b has left child a/(a+b) and right
child (a+b)/b.  It is a bijection from the naturals onto the positive
rationals with an O(bits) inverse via the tree path.

Searching for the first enumerated rational strictly inside an open interval
does not need a linear scan: the interval's minimal-denominator (Stern-Brocot
simplest) element is the unique element of minimal tree depth, every deeper
element has a larger breadth-first index, hence the simplest element IS the
one of least Calkin-Wilf index.  ``first_in_interval`` exploits this and runs
in O(bits); ``scan_first_in_interval`` keeps the literal scan as an
independent oracle.
"""

from __future__ import annotations

import enum
from itertools import groupby
from typing import Iterator, Union

from gmpy2 import mpq

from .errors import (
    EmptyIntervalError,
    NonPositiveRationalError,
    SearchBudgetExceededError,
)
from .rationals import Ordering, Rational, format_rational
from .reals import ComputableReal, compare_to_rational, is_rational

# position in the enumeration; 0-based
EnumIndex = int

DEFAULT_SEARCH_BUDGET = 1 << 22


class SelectionPolicy(enum.Enum):
    """Which "first rational in the interval" a caller wants.

    ENUMERATION_ORDER: least Calkin-Wilf index.  SIMPLEST_DENOMINATOR:
    minimal denominator, ties by minimal numerator.  For open intervals the
    two coincide extensionally (see module docstring); both names are kept
    because callers reason about them differently.
    """

    ENUMERATION_ORDER = "enum"
    SIMPLEST_DENOMINATOR = "simplest"


def nth_rational(n: EnumIndex) -> Rational:
    """The n-th Calkin-Wilf rational (0-based; n=0 -> 1/1)."""
    if n < 0:
        raise ValueError("enumeration index must be >= 0")
    a, b = 1, 1
    # bits of n+1 after the leading 1 spell the tree path, 0=left, 1=right
    for bit, run in groupby(bin(n + 1)[3:]):
        k = sum(1 for _ in run)
        if bit == "1":
            a += k * b
        else:
            b += k * a
    return mpq(a, b)


def index_of(q: Rational) -> EnumIndex:
    """Exact inverse of nth_rational via the tree path (no scanning)."""
    if not q > 0:
        raise NonPositiveRationalError(
            f"only positive rationals are enumerated, got {format_rational(q)}"
        )
    a, b = q.numerator, q.denominator
    runs = []  # (bit, length) from leaf to root
    while a != 1 or b != 1:
        if a > b:
            if b == 1:
                runs.append((1, a - 1))
                a = 1
            else:
                runs.append((1, a // b))
                a %= b
        else:
            if a == 1:
                runs.append((0, b - 1))
                b = 1
            else:
                runs.append((0, b // a))
                b %= a
    n1 = 1
    for bit, k in reversed(runs):
        n1 <<= k
        if bit:
            n1 |= (1 << k) - 1
    return int(n1 - 1)


def cw_sequence(start: EnumIndex = 0) -> Iterator[tuple[EnumIndex, Rational]]:
    """(index, rational) pairs of the enumeration from `start` onwards."""
    n = start
    while True:
        yield n, nth_rational(n)
        n += 1


# None stands for +infinity (no upper constraint)
UpperBound = Union[Rational, ComputableReal, None]


def _below_hi(m: Rational, hi: UpperBound, refine_budget: int) -> bool:
    """m < hi, exactly for rational hi, by surd algebra or refinement otherwise.

    hi may be None, meaning +infinity (no upper constraint).
    """
    if hi is None:
        return True
    if is_rational(hi):
        return m < hi
    return compare_to_rational(hi, m, refine_budget) is Ordering.GREATER


def simplest_in_interval(lo: Rational, hi: UpperBound, *,
                         max_steps: int = DEFAULT_SEARCH_BUDGET,
                         refine_budget: int = 256) -> Rational:
    """Stern-Brocot descent to the simplest rational in the open interval (lo, hi).

    lo must be a rational >= 0; hi may be rational or a computable real.
    Runs of identical descent directions are taken in one arithmetic jump, so
    thin intervals cost O(continued-fraction terms * log) rather than
    O(denominator).  `max_steps` bounds the number of descent iterations.
    """
    if lo < 0:
        raise NonPositiveRationalError("interval must lie within the positive rationals")
    if hi is not None:
        if is_rational(hi) and hi <= lo:
            raise EmptyIntervalError(
                f"empty interval ({format_rational(lo)}, {format_rational(hi)})"
            )
        if not is_rational(hi) and compare_to_rational(hi, lo, refine_budget) is Ordering.LESS:
            raise EmptyIntervalError("empty interval: upper bound is below the lower bound")

    lo_n, lo_d = lo.numerator, lo.denominator
    l0, l1 = 0, 1  # left frame, value <= lo
    r0, r1 = 1, 0  # right frame, value >= hi (1/0 plays infinity)
    for _ in range(max_steps):
        mn, md = l0 + r0, l1 + r1
        m = mpq(mn, md)
        if m <= lo:
            # jump right: largest k with (l + k*r) <= lo, k >= 1 known
            coef = r0 * lo_d - r1 * lo_n
            k = (lo_n * l1 - lo_d * l0) // coef
            l0, l1 = l0 + k * r0, l1 + k * r1
        elif not _below_hi(m, hi, refine_budget):
            # jump left: largest k with (r + k*l) >= hi, k >= 1 known
            if is_rational(hi):
                hi_n, hi_d = hi.numerator, hi.denominator
                coef = l0 * hi_d - l1 * hi_n  # < 0
                k = (hi_n * r1 - hi_d * r0) // coef
            else:
                k = _doubling_max_k(l0, l1, r0, r1, hi, refine_budget)
            r0, r1 = r0 + k * l0, r1 + k * l1
        else:
            return m
    raise SearchBudgetExceededError(
        f"descent exceeded {max_steps} iterations",
        progress={"left": (l0, l1), "right": (r0, r1)},
    )


def _doubling_max_k(l0, l1, r0, r1, hi: ComputableReal, refine_budget: int) -> int:
    """Largest k with (r + k*l)/(r1 + k*l1) above the irrational bound hi."""

    def above(k: int) -> bool:
        v = mpq(r0 + k * l0, r1 + k * l1)
        return compare_to_rational(hi, v, refine_budget) is Ordering.LESS

    k = 1
    while above(2 * k):
        k *= 2
    # invariant: above(k) and not above(2k); bisect in (k, 2k)
    lo_k, hi_k = k, 2 * k
    while hi_k - lo_k > 1:
        mid = (lo_k + hi_k) // 2
        if above(mid):
            lo_k = mid
        else:
            hi_k = mid
    return lo_k


def first_in_interval(lo: Rational, hi: UpperBound,
                      policy: SelectionPolicy = SelectionPolicy.ENUMERATION_ORDER, *,
                      max_steps: int = DEFAULT_SEARCH_BUDGET,
                      refine_budget: int = 256) -> tuple[Rational, EnumIndex]:
    """The first rational strictly inside (lo, hi) under the given policy.

    Returns the rational together with its enumeration index.  Under both
    policies the witness is the Stern-Brocot simplest element; under
    ENUMERATION_ORDER that element is provably also the one of least
    Calkin-Wilf index (unique minimal tree depth plus breadth-first order).
    """
    q = simplest_in_interval(lo, hi, max_steps=max_steps, refine_budget=refine_budget)
    return q, index_of(q)


def scan_first_in_interval(lo: Rational, hi: UpperBound, *,
                           max_index: int = DEFAULT_SEARCH_BUDGET,
                           refine_budget: int = 256) -> tuple[Rational, EnumIndex]:
    """Literal linear scan of the enumeration; independent oracle for tests."""
    if is_rational(hi) and hi <= lo:
        raise EmptyIntervalError(
            f"empty interval ({format_rational(lo)}, {format_rational(hi)})"
        )
    for n, q in cw_sequence():
        if n > max_index:
            break
        if q > lo and _below_hi(q, hi, refine_budget):
            return q, n
    raise SearchBudgetExceededError(
        f"no enumerated rational inside the interval up to index {max_index}",
        progress=max_index,
    )
