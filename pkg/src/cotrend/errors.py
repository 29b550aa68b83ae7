"""Exception taxonomy.

Three coarse families matter to the CLI exit-status contract: usage errors
(bad flags, unknown columns, bad config), data errors (unreadable or
malformed input files), and numeric errors (degenerate or singular inputs
discovered during computation).
"""


class CotrendError(Exception):
    """Base class for all library errors."""


class UsageError(CotrendError):
    """Bad request: unknown column, invalid config key or value."""


class DataError(CotrendError):
    """Problems with input files."""


class ParseError(DataError):
    """Non-numeric cell where a number (or empty) was required."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class StructureError(DataError):
    """Malformed table: missing header, duplicate or non-consecutive years."""


class NumericError(CotrendError):
    """Degenerate or ill-posed numerical input."""


class DomainError(NumericError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(NumericError):
    """A documented precondition of an operation does not hold."""


class ExtrapolationError(NumericError):
    """Missing value at a series endpoint; filling it would extrapolate."""


class EmptySeriesError(NumericError):
    """Series has no observed values at all."""


class SingularDesignError(NumericError):
    """Regressor matrix is rank deficient (or numerically so)."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class SingularPrefixError(NumericError):
    """A leading sub-design needed by recursive estimation is singular."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class DegenerateSeriesError(NumericError):
    """Series has zero variance (or another property making a statistic undefined)."""


class DegenerateStatisticError(NumericError):
    """Statistic undefined for this input (e.g. all-zero residuals)."""
