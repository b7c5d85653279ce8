import itertools
import random

import pytest
from gmpy2 import mpq

from densemap.errors import (
    InvalidSurdError,
    NotSeparatedError,
    RefinementBudgetExceededError,
)
from densemap.rationals import Ordering
from densemap.reals import (
    GenericRefiner,
    QuadraticSurd,
    RationalInterval,
    SurdStream,
    compare_by_refinement,
    compare_reals,
    compare_to_rational,
    format_surd,
    parse_real,
    parse_surd,
    rational_between,
    sqrt_of_rational,
)

ROOT2 = QuadraticSurd(mpq(0), mpq(1), 2)


def random_surd(rng):
    return QuadraticSurd(
        mpq(rng.randint(-50, 50), rng.randint(1, 20)),
        mpq(rng.choice((-1, 1)) * rng.randint(1, 50), rng.randint(1, 20)),
        rng.choice((2, 3, 5, 6, 7, 10)),
    )


def test_interval_requires_positive_width():
    with pytest.raises(ValueError):
        RationalInterval(mpq(1, 2), mpq(1, 2))


def test_surd_rejects_rational_values():
    for d in (1, 4, 9, 16, 25):
        with pytest.raises(InvalidSurdError):
            QuadraticSurd(mpq(3), mpq(1), d)
    with pytest.raises(InvalidSurdError):
        QuadraticSurd(mpq(3), mpq(0), 2)


def test_surd_canonicalizes_square_factors():
    x = QuadraticSurd(mpq(0), mpq(1), 8)  # sqrt(8) = 2*sqrt(2)
    assert (x.coeff, x.radicand) == (mpq(2), 2)
    y = sqrt_of_rational(mpq(3, 2))  # sqrt(6)/2
    assert (y.shift, y.coeff, y.radicand) == (mpq(0), mpq(1, 2), 6)


def test_refine_examples():
    iv = ROOT2.refine_to(mpq(1, 100))
    assert iv.width < mpq(1, 100)
    assert iv.lo * iv.lo < 2 < iv.hi * iv.hi  # bisection oracle: sign of m^2 - 2
    coarse = ROOT2.refine_to(mpq(1))
    assert mpq(1) <= coarse.lo and coarse.hi <= mpq(2) and coarse.width < 1


def test_enclosures_nested_and_shrinking():
    rng = random.Random(5)
    widths = [mpq(1, 10**k) for k in (1, 5, 10, 20, 30)]
    for _ in range(50):
        x = random_surd(rng)
        previous = None
        for w in widths:
            iv = x.refine_to(w, max_steps=512)
            assert iv.width < w
            if previous is not None:
                assert previous.encloses(iv)
            previous = iv


def test_compare_examples():
    assert compare_to_rational(ROOT2, mpq(3, 2)) is Ordering.LESS
    assert compare_to_rational(ROOT2, mpq(7, 5)) is Ordering.GREATER
    one_plus_root2 = QuadraticSurd(mpq(1), mpq(1), 2)
    assert compare_to_rational(one_plus_root2, mpq(12, 5)) is Ordering.GREATER
    assert compare_by_refinement(one_plus_root2, mpq(12, 5)) is Ordering.GREATER


def test_exact_and_refinement_comparisons_agree():
    rng = random.Random(6)
    for _ in range(2000):
        x = random_surd(rng)
        q = mpq(rng.randint(-2000, 2000), rng.randint(1, 100))
        assert x.cmp_rational(q) is compare_by_refinement(x, q)


def test_generic_refiner_budget_error():
    stuck = GenericRefiner(lambda k: RationalInterval(mpq(0), mpq(1)), name="stuck")
    with pytest.raises(RefinementBudgetExceededError):
        compare_to_rational(stuck, mpq(1, 2), budget=16)


def test_generic_refiner_comparison():
    # third-root-of-2 style refiner: bisection on m^3 < 2
    def fn(k):
        lo, hi = mpq(1), mpq(2)
        for _ in range(k):
            m = (lo + hi) / 2
            if m * m * m < 2:
                lo = m
            else:
                hi = m
        return RationalInterval(lo, hi)

    cbrt2 = GenericRefiner(fn, name="cbrt2")
    assert compare_to_rational(cbrt2, mpq(5, 4)) is Ordering.GREATER
    assert compare_to_rational(cbrt2, mpq(13, 10)) is Ordering.LESS


def test_rational_between_examples():
    assert rational_between(mpq(1, 2), mpq(2, 3)) == mpq(7, 12)
    # pinned output of the gap-mediant rule from enclosures (0,0) and (1,2)
    assert rational_between(mpq(0), ROOT2) == mpq(1, 2)


def test_rational_between_refuses_equal_and_misordered():
    with pytest.raises(NotSeparatedError):
        rational_between(ROOT2, QuadraticSurd(mpq(0), mpq(1), 2))
    with pytest.raises(NotSeparatedError):
        rational_between(mpq(2, 3), mpq(1, 2))
    with pytest.raises(NotSeparatedError):
        rational_between(mpq(3, 2), ROOT2)


def test_rational_between_strictly_inside_random():
    rng = random.Random(9)
    for _ in range(500):
        kind = rng.randrange(3)
        if kind == 0:
            a = mpq(rng.randint(-500, 500), rng.randint(1, 40))
            b = a + mpq(1, rng.randint(1, 500))
        elif kind == 1:
            a = random_surd(rng)
            b = mpq(rng.randint(-500, 500), rng.randint(1, 40))
            if compare_to_rational(a, b) is Ordering.GREATER:
                a, b = b, a
        else:
            a, b = random_surd(rng), random_surd(rng)
            order = compare_reals(a, b)
            if order is Ordering.EQUAL:
                continue
            if order is Ordering.GREATER:
                a, b = b, a
        q = rational_between(a, b)
        assert compare_reals(a, q) is Ordering.LESS
        assert compare_reals(q, b) is Ordering.LESS


def test_compare_reals_exact_surd_paths():
    a = QuadraticSurd(mpq(1), mpq(1), 2)
    b = QuadraticSurd(mpq(1), mpq(1), 2)
    assert compare_reals(a, b) is Ordering.EQUAL
    c = QuadraticSurd(mpq(1), mpq(2), 2)
    assert compare_reals(a, c) is Ordering.LESS
    # distinct radicands separate by refinement: sqrt(2) < sqrt(3)
    assert compare_reals(ROOT2, QuadraticSurd(mpq(0), mpq(1), 3)) is Ordering.LESS


def test_surd_text_roundtrip():
    rng = random.Random(10)
    for _ in range(100):
        x = random_surd(rng)
        assert parse_surd(format_surd(x)) == x
    assert parse_surd("sqrt(2)") == ROOT2
    assert parse_surd("3*sqrt(2)") == QuadraticSurd(mpq(0), mpq(3), 2)
    assert parse_real("7/5") == mpq(7, 5)


def test_surd_stream_distinct_positive_deterministic():
    first = list(SurdStream(123, count=300))
    again = list(SurdStream(123, count=300))
    assert first == again
    keys = {(x.shift, x.coeff, x.radicand) for x in first}
    assert len(keys) == 300
    assert all(x.is_positive() for x in first)
    other = list(SurdStream(124, count=300))
    assert other != first
