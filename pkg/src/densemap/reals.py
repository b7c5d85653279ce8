"""Computable real numbers as nested shrinking rational enclosures.

Two flavours are provided:

* ``QuadraticSurd`` — exact values p + q*sqrt(d) with rational p, q (q != 0)
  and a non-square radicand d.  Order against rationals is decided exactly by
  sign analysis and squaring, which makes the class usable as an independent
  oracle for the enclosure-based engine.
* ``GenericRefiner`` — an arbitrary user-supplied deterministic sequence of
  nested rational intervals; comparisons are only semi-decidable and are
  guarded by a refinement budget.

``rational_between`` realizes the constructive claim that a rational sits
strictly between any two distinct reals: refine both arguments until their
enclosures are disjoint, then take the mediant of the gap endpoints.
"""

from __future__ import annotations

import math
import random
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from gmpy2 import mpq

from .errors import (
    InvalidSurdError,
    NotSeparatedError,
    ParseError,
    RefinementBudgetExceededError,
)
from .rationals import Ordering, Rational, format_rational, mediant, parse_rational

DEFAULT_REFINE_BUDGET = 256


@dataclass(frozen=True)
class RationalInterval:
    """A nonempty open interval with exact rational endpoints."""

    lo: Rational
    hi: Rational

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(
                f"degenerate interval [{format_rational(self.lo)}, "
                f"{format_rational(self.hi)}]"
            )

    @property
    def width(self) -> Rational:
        return self.hi - self.lo

    def contains_strict(self, q: Rational) -> bool:
        return self.lo < q < self.hi

    def encloses(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


class ComputableReal(ABC):
    """A real number presented by a deterministic nested-enclosure generator."""

    @abstractmethod
    def enclosures(self) -> Iterator[RationalInterval]:
        """Fresh iterator of nested intervals whose widths tend to zero."""

    def refine_to(self, width: Rational, max_steps: int = DEFAULT_REFINE_BUDGET) -> RationalInterval:
        """First enclosure of width strictly below `width`."""
        if not width > 0:
            raise ValueError("width must be positive")
        iv = None
        for step, iv in enumerate(self.enclosures()):
            if iv.width < width:
                return iv
            if step >= max_steps:
                break
        raise RefinementBudgetExceededError(
            f"no enclosure of width < {format_rational(width)} within {max_steps} steps",
            progress=iv,
        )


def _squarefree_decompose(n: int) -> tuple[int, int]:
    """n = s*s*rest with rest squarefree; trial division, fine at desk scale."""
    s, rest = 1, 1
    f = 2
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        s *= f ** (e // 2)
        rest *= f ** (e % 2)
        f += 1 if f == 2 else 2
    return s, rest * n


def _sign_with_root(a: Rational, c: Rational, d: int) -> int:
    """Exact sign of a + c*sqrt(d) for c != 0 and non-square d."""
    if c > 0:
        if a >= 0:
            return 1
        # a < 0: compare c*sqrt(d) against -a by squaring
        lhs, rhs = c * c * d, a * a
        if lhs == rhs:  # would force sqrt(d) rational
            raise InvalidSurdError(f"radicand {d} is a perfect rational square")
        return 1 if lhs > rhs else -1
    return -_sign_with_root(-a, -c, d)


@dataclass(frozen=True)
class QuadraticSurd(ComputableReal):
    """The irrational number shift + coeff*sqrt(radicand)."""

    shift: Rational
    coeff: Rational
    radicand: int

    def __post_init__(self):
        object.__setattr__(self, "shift", mpq(self.shift))
        object.__setattr__(self, "coeff", mpq(self.coeff))
        object.__setattr__(self, "radicand", int(self.radicand))
        if self.radicand <= 0:
            raise InvalidSurdError(f"radicand must be positive, got {self.radicand}")
        if self.coeff == 0:
            raise InvalidSurdError("coefficient of sqrt must be nonzero")
        s, rest = _squarefree_decompose(self.radicand)
        if rest == 1:
            raise InvalidSurdError(
                f"radicand {self.radicand} is a perfect square; value would be rational"
            )
        if s != 1:
            # canonical form: squarefree radicand, square factor absorbed
            object.__setattr__(self, "coeff", self.coeff * s)
            object.__setattr__(self, "radicand", rest)

    def cmp_rational(self, q: Rational) -> Ordering:
        """Exact order against a rational; never EQUAL (the value is irrational)."""
        s = _sign_with_root(self.shift - q, self.coeff, self.radicand)
        return Ordering.GREATER if s > 0 else Ordering.LESS

    def is_positive(self) -> bool:
        return _sign_with_root(self.shift, self.coeff, self.radicand) > 0

    def _exceeds(self, m: Rational) -> bool:
        """value > m, decided by squaring (m - shift)/coeff against the radicand.

        Deliberately a different code path than cmp_rational: this is the
        bisection engine's test, cmp_rational is the algebraic oracle.
        """
        t = (m - self.shift) / self.coeff
        if self.coeff > 0:
            return t < 0 or t * t < self.radicand
        return t > 0 and t * t > self.radicand

    def initial_enclosure(self) -> RationalInterval:
        s = math.isqrt(self.radicand)
        a = self.shift + self.coeff * s
        b = self.shift + self.coeff * (s + 1)
        return RationalInterval(min(a, b), max(a, b))

    def enclosures(self) -> Iterator[RationalInterval]:
        iv = self.initial_enclosure()
        yield iv
        lo, hi = iv.lo, iv.hi
        while True:
            m = (lo + hi) / 2
            if self._exceeds(m):
                lo = m
            else:
                hi = m
            yield RationalInterval(lo, hi)


class GenericRefiner(ComputableReal):
    """Wraps a deterministic step -> interval function.

    Contract on `fn`: fn(k) must be nested within fn(k-1) and the widths must
    tend to zero; violations of nesting are detected when observed.
    """

    def __init__(self, fn, name: str = "generic"):
        self._fn = fn
        self.name = name

    def enclosures(self) -> Iterator[RationalInterval]:
        prev = None
        k = 0
        while True:
            iv = self._fn(k)
            if prev is not None and not prev.encloses(iv):
                raise ValueError(f"refiner {self.name!r} broke nesting at step {k}")
            yield iv
            prev = iv
            k += 1


Real = Union[Rational, ComputableReal]


def is_rational(v) -> bool:
    return isinstance(v, mpq)


def sqrt_of_rational(r: Rational) -> QuadraticSurd:
    """sqrt(n/d) as the canonical surd sqrt(n*d)/d."""
    if not r > 0:
        raise InvalidSurdError("can only take sqrt of a positive rational")
    return QuadraticSurd(mpq(0), mpq(1, r.denominator), r.numerator * r.denominator)


def compare_by_refinement(x: ComputableReal, q: Rational,
                          budget: int = DEFAULT_REFINE_BUDGET) -> Ordering:
    """Order x against q by refining until q falls outside the enclosure."""
    iv = None
    for step, iv in enumerate(x.enclosures()):
        if q <= iv.lo:
            return Ordering.GREATER
        if q >= iv.hi:
            return Ordering.LESS
        if step >= budget:
            break
    raise RefinementBudgetExceededError(
        f"could not separate value from {format_rational(q)} in {budget} steps",
        progress=iv,
    )


def compare_to_rational(x: ComputableReal, q: Rational,
                        budget: int = DEFAULT_REFINE_BUDGET) -> Ordering:
    """Exact surd algebra when available, enclosure refinement otherwise."""
    if isinstance(x, QuadraticSurd):
        return x.cmp_rational(q)
    return compare_by_refinement(x, q, budget)


def compare_reals(x: Real, y: Real, budget: int = DEFAULT_REFINE_BUDGET) -> Ordering:
    """Three-way order on rationals and computable reals.

    EQUAL is only ever produced on the exactly decidable paths
    (rational/rational and surd/surd); refinement separates distinct values
    or exhausts its budget.
    """
    if is_rational(x) and is_rational(y):
        return Ordering.LESS if x < y else Ordering.GREATER if x > y else Ordering.EQUAL
    if is_rational(x):
        return _flip(compare_to_rational(y, x, budget))
    if is_rational(y):
        return compare_to_rational(x, y, budget)
    if isinstance(x, QuadraticSurd) and isinstance(y, QuadraticSurd):
        if x.radicand == y.radicand:
            a = x.shift - y.shift
            c = x.coeff - y.coeff
            if c == 0:
                return Ordering.LESS if a < 0 else Ordering.GREATER if a > 0 else Ordering.EQUAL
            s = _sign_with_root(a, c, x.radicand)
            return Ordering.GREATER if s > 0 else Ordering.LESS
        # distinct squarefree radicands: the values are provably unequal,
        # so lockstep refinement terminates
    ex, ey = x.enclosures(), y.enclosures()
    ix, iy = next(ex), next(ey)
    for _ in range(budget):
        if ix.hi <= iy.lo:
            return Ordering.LESS
        if iy.hi <= ix.lo:
            return Ordering.GREATER
        ix, iy = next(ex), next(ey)
    raise RefinementBudgetExceededError(
        f"could not separate the two reals in {budget} refinement steps",
        progress=(ix, iy),
    )


def _flip(o: Ordering) -> Ordering:
    return Ordering(-o.value)


def _enclosure_pairs(v: Real):
    """Iterator of (lo, hi) pairs; a rational is its own degenerate enclosure."""
    if is_rational(v):
        while True:
            yield v, v
    else:
        for iv in v.enclosures():
            yield iv.lo, iv.hi


def rational_between(a: Real, b: Real, budget: int = DEFAULT_REFINE_BUDGET) -> Rational:
    """A rational strictly between a and b (requires a < b).

    Rational endpoints use the exact midpoint; any other combination refines
    both sides until the enclosures are disjoint and returns the mediant of
    the gap endpoints.  Deterministic for fixed inputs and budget.
    """
    if is_rational(a) and is_rational(b):
        if not a < b:
            raise NotSeparatedError(
                f"{format_rational(a)} and {format_rational(b)} are not in order a < b"
            )
        return (a + b) / 2

    order = compare_reals(a, b, budget)
    if order is not Ordering.LESS:
        raise NotSeparatedError("arguments are equal or in wrong order (need a < b)")

    ea, eb = _enclosure_pairs(a), _enclosure_pairs(b)
    (_, a_hi), (b_lo, _) = next(ea), next(eb)
    for _ in range(budget + 1):
        if a_hi < b_lo:
            return mediant(a_hi, b_lo)
        (_, a_hi), (b_lo, _) = next(ea), next(eb)
    raise RefinementBudgetExceededError(
        f"enclosures did not separate within {budget} steps",
        progress=(a_hi, b_lo),
    )


_SURD_RE = re.compile(
    r"^\s*(?P<p>-?\d+(?:/\d+)?)\s*(?P<sign>[+-])\s*(?P<q>\d+(?:/\d+)?)"
    r"\s*\*\s*sqrt\(\s*(?P<d>\d+)\s*\)\s*$"
)
_SHORT_SURD_RE = re.compile(
    r"^\s*(?:(?P<q>-?\d+(?:/\d+)?)\s*\*\s*)?sqrt\(\s*(?P<d>\d+(?:/\d+)?)\s*\)\s*$"
)


def format_surd(x: QuadraticSurd) -> str:
    """Canonical text form "p+q*sqrt(d)" / "p-q*sqrt(d)" with n/d fractions."""
    sign = "-" if x.coeff < 0 else "+"
    return (
        f"{format_rational(x.shift)}{sign}{format_rational(abs(x.coeff))}"
        f"*sqrt({x.radicand})"
    )


def parse_surd(text: str) -> QuadraticSurd:
    """Parse "p+q*sqrt(d)" plus the shorthands "sqrt(d)" and "q*sqrt(d)"."""
    m = _SURD_RE.match(text)
    if m:
        p = parse_rational(m.group("p"))
        q = parse_rational(m.group("q"))
        if m.group("sign") == "-":
            q = -q
        return QuadraticSurd(p, q, int(m.group("d")))
    m = _SHORT_SURD_RE.match(text)
    if m:
        inner = parse_rational(m.group("d"))
        root = sqrt_of_rational(inner)
        if m.group("q") is not None:
            q = parse_rational(m.group("q"))
            if q == 0:
                raise InvalidSurdError("coefficient of sqrt must be nonzero")
            root = QuadraticSurd(mpq(0), q * root.coeff, root.radicand)
        return root
    raise ParseError(f"not a quadratic surd literal: {text!r}")


def parse_real(text: str) -> Real:
    """Parse either a rational literal or a surd literal."""
    try:
        return parse_rational(text)
    except ParseError:
        return parse_surd(text)


class SurdStream:
    """Seeded injective stream of positive quadratic surds.

    Stands in for a well-ordering of the positive irrationals: every finite
    stage of the greedy procedure only needs a sequence of pairwise distinct
    positive irrationals.  The generator algorithm and its parameters are part
    of the trace header so runs can be reproduced from the file alone.
    """

    ALGORITHM = "surd-stream/1"
    DEFAULT_RADICANDS = (2, 3, 5, 6, 7, 10)

    def __init__(self, seed: int, count: int | None = None,
                 radicands: Sequence[int] = DEFAULT_RADICANDS):
        self.seed = seed
        self.count = count
        self.radicands = tuple(radicands)

    def params(self) -> dict:
        return {
            "algorithm": self.ALGORITHM,
            "seed": self.seed,
            "radicands": list(self.radicands),
        }

    def __iter__(self) -> Iterator[QuadraticSurd]:
        rng = random.Random(self.seed)
        seen: set[tuple] = set()
        emitted = 0
        while self.count is None or emitted < self.count:
            p = mpq(rng.randint(0, 999), rng.randint(1, 32))
            q = mpq(rng.choice((-1, 1)) * rng.randint(1, 999), rng.randint(1, 32))
            d = rng.choice(self.radicands)
            try:
                surd = QuadraticSurd(p, q, d)
            except InvalidSurdError:
                continue
            key = (surd.shift, surd.coeff, surd.radicand)
            if key in seen or not surd.is_positive():
                continue
            seen.add(key)
            emitted += 1
            yield surd
