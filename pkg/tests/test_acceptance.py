"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  Everything is exact: the only tolerances are "zero
disagreements" and "zero failures", asserted as such.
"""

import io
import random
import time
from contextlib import contextmanager

import pytest
from gmpy2 import mpq

from densemap.cantor import (
    DisjointIntervalFamily,
    MappedCalkinWilf,
    cantor_assign,
    check_order_isomorphism,
    verify_minimality,
)
from densemap.enumeration import SelectionPolicy, first_in_interval, index_of, nth_rational
from densemap.greedy import Cause, check_invariants, run
from densemap.rationals import Ordering
from densemap.reals import (
    QuadraticSurd,
    RationalInterval,
    SurdStream,
    compare_by_refinement,
    compare_reals,
    rational_between,
    sqrt_of_rational,
)
from densemap.traces import RunConfig, read_trace, replay_check, write_trace

from oracles import cw_by_recurrence

ALL_RUN_CAUSES = []  # every run outcome produced anywhere in this module


@contextmanager
def criterion(num, desc):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"\n[ACCEPTANCE] criterion {num}: FAIL - {desc}")
        raise
    print(f"\n[ACCEPTANCE] criterion {num}: PASS - {desc} "
          f"({time.monotonic() - start:.1f}s)")


@pytest.fixture(scope="module")
def greedy_runs():
    """10^4-step runs for 5 seeds under both policies, with replay reports."""
    results = []
    for policy in SelectionPolicy:
        for seed in range(5):
            stream = SurdStream(seed)
            config = RunConfig(seed=seed, steps=10_000, policy=policy,
                               stream_params=stream.params())
            outcome = run(stream, config.steps, policy)
            ALL_RUN_CAUSES.append(outcome.cause)
            buf = io.StringIO()
            write_trace(buf, outcome, config)
            replay = replay_check(read_trace(io.StringIO(buf.getvalue())))
            results.append((config, outcome, check_invariants(outcome), replay))
    return results


def test_criterion_1_enumeration_correctness():
    with criterion(1, "enumeration roundtrip for n < 10^6, recurrence oracle "
                      "agreement for 10^5 terms"):
        for n, expected in enumerate(cw_by_recurrence(100_000)):
            assert nth_rational(n) == expected
        for n in range(1_000_000):
            assert index_of(nth_rational(n)) == n


def test_criterion_2_comparison_oracle_agreement():
    with criterion(2, "refinement comparison equals exact surd algebra on 10^5 pairs"):
        rng = random.Random(20)
        disagreements = 0
        for _ in range(100_000):
            x = QuadraticSurd(
                mpq(rng.randint(-50, 50), rng.randint(1, 20)),
                mpq(rng.choice((-1, 1)) * rng.randint(1, 50), rng.randint(1, 20)),
                rng.choice((2, 3, 5, 6, 7, 10)),
            )
            q = mpq(rng.randint(-3000, 3000), rng.randint(1, 100))
            if x.cmp_rational(q) is not compare_by_refinement(x, q):
                disagreements += 1
        assert disagreements == 0


def test_criterion_3_betweenness_totality():
    with criterion(3, "rational_between succeeds strictly inside on 10^4 pairs"):
        rng = random.Random(21)

        def surd():
            return QuadraticSurd(
                mpq(rng.randint(-40, 40), rng.randint(1, 16)),
                mpq(rng.choice((-1, 1)) * rng.randint(1, 40), rng.randint(1, 16)),
                rng.choice((2, 3, 5, 6, 7, 10)),
            )

        failures = 0
        done = 0
        while done < 10_000:
            kind = done % 3
            if kind == 0:
                a = mpq(rng.randint(-400, 400), rng.randint(1, 50))
                b = a + mpq(1, rng.randint(1, 1000))
            elif kind == 1:
                a, b = surd(), mpq(rng.randint(-400, 400), rng.randint(1, 50))
                if compare_reals(a, b) is Ordering.GREATER:
                    a, b = b, a
            else:
                a, b = surd(), surd()
                order = compare_reals(a, b)
                if order is Ordering.EQUAL:
                    continue
                if order is Ordering.GREATER:
                    a, b = b, a
            q = rational_between(a, b)
            if not (compare_reals(a, q) is Ordering.LESS
                    and compare_reals(q, b) is Ordering.LESS):
                failures += 1
            done += 1
        assert failures == 0


def test_criterion_4_cantor_correspondence():
    with criterion(4, "100 random families (up to 10^3 intervals): assignment "
                      "completes, order isomorphism exact, minimality re-verified"):
        rng = random.Random(22)
        points = MappedCalkinWilf()
        sizes = [1000] * 10 + [rng.randint(1, 300) for _ in range(90)]
        for n in sizes:
            grid = 1 << 20
            cuts = sorted(rng.sample(range(1, grid), 2 * n))
            family = DisjointIntervalFamily([
                RationalInterval(mpq(cuts[2 * i], grid), mpq(cuts[2 * i + 1], grid))
                for i in range(n)
            ])
            assignment = cantor_assign(family, points, n)
            assert len(assignment) == n
            assert len(set(assignment.kappa)) == n
            assert check_order_isomorphism(assignment, family)
            tractable = [v for v in range(n) if assignment.kappa[v] <= 20_000]
            for v in rng.sample(tractable, min(10, len(tractable))):
                assert verify_minimality(family, points, assignment, v)


def test_criterion_5_greedy_invariants_and_replay(greedy_runs):
    with criterion(5, "10^4-step runs x 5 seeds x both policies: all invariants "
                      "hold, replay re-derives every step bit-exactly"):
        assert len(greedy_runs) == 10
        for config, outcome, report, replay in greedy_runs:
            assert len(outcome.trace) == 10_000
            assert report.ok, (config, report.failures)
            assert report.injective and report.fresh and report.sandwich
            assert report.cardinality and report.floor_maximal
            assert replay.ok, (config, replay.failures)


def test_criterion_6_non_exhaustion(greedy_runs):
    with criterion(6, "outcome cause RationalsExhausted never occurs"):
        causes = list(ALL_RUN_CAUSES)
        for seed in range(5):  # short and truncated runs as well
            causes.append(run(SurdStream(seed, count=7), 100).cause)
            causes.append(run(SurdStream(seed), 50).cause)
        assert causes and Cause.RATIONALS_EXHAUSTED not in causes
        assert all(c in (Cause.BUDGET_EXHAUSTED, Cause.SOURCE_STREAM_ENDED)
                   for c in causes)


def test_criterion_7_order_preservation_counterexample():
    with criterion(7, "pinned pair sqrt(2), sqrt(3/2): inversion detected"):
        xi1 = QuadraticSurd(mpq(0), mpq(1), 2)
        xi2 = sqrt_of_rational(mpq(3, 2))
        outcome = run(iter([xi1, xi2]), 10, SelectionPolicy.ENUMERATION_ORDER)
        rec1, rec2 = outcome.trace
        assert rec1.q_assigned == mpq(1)
        assert rec2.q_floor == mpq(1) and rec2.q_assigned > mpq(1)
        assert compare_reals(xi2, xi1) is Ordering.LESS
        report = check_invariants(outcome)
        assert report.inversion_count == 1
        assert report.inversion_witness is not None


def test_criterion_8_properness_witness(greedy_runs):
    with criterion(8, "a rational strictly between members of final Q, absent "
                      "from Q, constructed for every completed run"):
        for config, outcome, report, _ in greedy_runs:
            assert report.properness_ok
            w = report.properness_witness
            assert w is not None
            members = {mpq(0)} | {r.q_assigned for r in outcome.trace}
            assert w not in members
            below = max(q for q in members if q < w)
            above = min(q for q in members if q > w)
            assert below < w < above
