"""Exception hierarchy shared by all densemap modules.

Every distinct failure mode named in the public API gets its own class so
callers (and the CLI exit-code table) can tell them apart without string
matching.
"""


class DensemapError(Exception):
    """Base class for all densemap errors."""


class ParseError(DensemapError):
    """Malformed textual input (fraction, surd, trace record, ...)."""


class ZeroDenominatorError(DensemapError):
    """A rational was constructed with denominator zero."""


class DivisionByZeroError(DensemapError):
    """Exact division by the zero rational."""


class NonPositiveRationalError(DensemapError):
    """An operation restricted to positive rationals received q <= 0."""


class EmptyIntervalError(DensemapError):
    """The open interval handed to a search is provably empty."""


class InvalidSurdError(DensemapError):
    """Quadratic surd parameters do not describe an irrational number."""


class NotSeparatedError(DensemapError):
    """Arguments expected to satisfy a < b are equal or in wrong order."""


class DuplicateIrrationalError(DensemapError):
    """The same irrational was fed to the greedy procedure twice."""


class OverlappingIntervalsError(DensemapError):
    """An interval family violates pairwise disjointness."""


class SignatureClashError(DensemapError):
    """A candidate point coincides with an already chosen point."""


class BudgetError(DensemapError):
    """Base for all budget exhaustion failures; carries progress made."""

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress


class SearchBudgetExceededError(BudgetError):
    """Interval search gave up before finding a witness."""


class RefinementBudgetExceededError(BudgetError):
    """Enclosure refinement gave up before reaching the requested state."""


class TraceFormatError(DensemapError):
    """A trace file does not conform to the densemap-trace/1 format."""


class ReplayMismatchError(DensemapError):
    """Re-derivation of a trace step disagrees with the recorded value."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
