"""Canonical arbitrary-precision rationals.

The concrete number type is ``gmpy2.mpq``: it keeps gcd-reduced form with a
strictly positive denominator after every operation, which is exactly the
canonical-form contract the rest of the package relies on.  This module wraps
it with the small operation surface everything else uses (construction,
three-way comparison, arithmetic, mediant, text I/O) and never touches
floating point.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from gmpy2 import mpq

from .errors import DivisionByZeroError, ParseError, ZeroDenominatorError

# The canonical rational type. Values are immutable and hashable.
Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def make(numerator: int, denominator: int = 1) -> Rational:
    """Build the canonical fraction numerator/denominator.

    The sign ends up on the numerator; gcd reduction is eager.
    """
    if denominator == 0:
        raise ZeroDenominatorError(f"zero denominator in {numerator}/0")
    return mpq(numerator, denominator)


def compare(a: Rational, b: Rational) -> Ordering:
    """Total order by cross multiplication (delegated to exact mpq compare)."""
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.EQUAL


def arith(a: Rational, b: Rational, op: str) -> Rational:
    """Exact +, -, *, / with op in {'add','sub','mul','div'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DivisionByZeroError(f"division of {format_rational(a)} by zero")
        return a / b
    raise ValueError(f"unknown arithmetic op {op!r}")


def mediant(a: Rational, b: Rational) -> Rational:
    """(a.num + b.num) / (a.den + b.den); strictly between a and b when a < b."""
    return mpq(a.numerator + b.numerator, a.denominator + b.denominator)


def floor(q: Rational) -> int:
    return q.numerator // q.denominator


def parse_rational(text: str) -> Rational:
    """Parse "n", "n/d", or a finite decimal literal, all converted exactly."""
    try:
        f = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        if "/0" in text.replace(" ", ""):
            raise ZeroDenominatorError(f"zero denominator in {text!r}") from exc
        raise ParseError(f"not a rational literal: {text!r}") from exc
    return mpq(f.numerator, f.denominator)


def format_rational(q: Rational) -> str:
    """Canonical "n/d" text form, denominator always spelled out."""
    return f"{q.numerator}/{q.denominator}"


def to_decimal_string(q: Rational, digits: int) -> str:
    """Truncated decimal rendering with exactly `digits` fractional digits.

    Display only: computed by integer long division, no floats involved.
    """
    if digits < 0:
        raise ValueError("digits must be >= 0")
    sign = "-" if q < 0 else ""
    n, d = abs(q.numerator), q.denominator
    whole, rem = divmod(n, d)
    if digits == 0:
        return f"{sign}{whole}"
    frac = rem * 10**digits // d
    return f"{sign}{whole}.{frac:0{digits}d}"
