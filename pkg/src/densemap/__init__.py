"""densemap: an exact-arithmetic laboratory for countable dense order maps.

Everything is computed over arbitrary-precision rationals; floats never enter
any result.  See README.md for the CLI and the acceptance suite.
"""

from .rationals import (
    Ordering,
    Rational,
    arith,
    compare,
    format_rational,
    make,
    mediant,
    parse_rational,
    to_decimal_string,
)
from .enumeration import (
    EnumIndex,
    SelectionPolicy,
    cw_sequence,
    first_in_interval,
    index_of,
    nth_rational,
    scan_first_in_interval,
    simplest_in_interval,
)
from .reals import (
    ComputableReal,
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
from .cantor import (
    CantorAssignment,
    DensePointSequence,
    DisjointIntervalFamily,
    ExplicitPoints,
    MappedCalkinWilf,
    Side,
    cantor_assign,
    check_order_isomorphism,
    interval_signature,
    position_signature,
    verify_minimality,
)
from .greedy import (
    Cause,
    GreedyState,
    InvariantReport,
    PairRecord,
    RunOutcome,
    check_invariants,
    greedy_step,
    largest_below,
    run,
)
from .traces import (
    ParsedTrace,
    ReplayReport,
    RunConfig,
    read_trace,
    replay_check,
    write_trace,
)

__version__ = "0.1.0"
