"""Exception taxonomy shared across the package.

Every concrete error carries a short machine-readable ``code`` so the CLI
can report failures uniformly.  The three intermediate families map onto
process exit statuses: configuration errors (1), data errors (2), and
numerical failures (3).
"""


class ContourRegError(Exception):
    """Base class for every error raised by this package."""

    code = "Error"


class ConfigError(ContourRegError, ValueError):
    """A request that can never be satisfied regardless of the data."""

    code = "ConfigError"


class DataError(ContourRegError, ValueError):
    """Input data that fails validation or cannot support the request."""

    code = "DataError"


class NumericalError(ContourRegError, ArithmeticError):
    """A numerical degeneracy encountered while fitting."""

    code = "NumericalError"


# --- configuration -------------------------------------------------------

class UnknownMethodError(ConfigError):
    code = "UnknownMethod"


class DimensionTooLargeError(ConfigError):
    """Requested subspace dimension is not strictly below the ambient one."""

    code = "DimensionTooLarge"


class AmbientMismatchError(ConfigError):
    """Two subspaces live in spaces of different ambient dimension."""

    code = "AmbientMismatch"


# --- data ----------------------------------------------------------------

class DimensionMismatchError(DataError):
    code = "DimensionMismatch"


class NonFiniteEntryError(DataError):
    code = "NonFiniteEntry"


class TooFewRowsError(DataError):
    code = "TooFewRows"


class TooManySlicesError(DataError):
    """More response slices requested than the sample can fill."""

    code = "TooManySlices"


class SliceTooSmallError(DataError):
    code = "SliceTooSmall"


class ConstantResponseError(DataError):
    code = "ConstantResponse"


class ParseError(DataError):
    """Malformed delimited input; carries 1-based row/column coordinates."""

    code = "ParseError"

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class MissingResponseColumnError(DataError):
    code = "MissingResponseColumn"


class NonNumericCellError(ParseError):
    code = "NonNumericCell"


# --- numerical -----------------------------------------------------------

class RankDeficientError(NumericalError):
    code = "RankDeficient"


class SingularCovarianceError(NumericalError):
    code = "SingularCovariance"


class DegeneratePairError(NumericalError):
    """The two anchor points of a candidate pair coincide."""

    code = "DegeneratePair"


class NoPairsSelectedError(NumericalError):
    code = "NoPairsSelected"


class EmptyAfterDegenerateError(NumericalError):
    """Every candidate pair was degenerate, leaving nothing to accumulate."""

    code = "EmptyAfterDegenerate"
