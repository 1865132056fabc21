"""Exception hierarchy for the sbergsma package.

Every error raised by the library derives from :class:`SbergsmaError`, so the
CLI can map failures to a machine-readable category (the class name).
"""


class SbergsmaError(Exception):
    """Base class for all library errors."""

    @property
    def category(self) -> str:
        return type(self).__name__


# --- series / kernel errors -------------------------------------------------

class LengthError(SbergsmaError):
    """Series too short for the requested operation."""


class NonFiniteError(SbergsmaError):
    """Input contains NaN or infinite values."""


class DimensionMismatchError(SbergsmaError):
    """Arrays that must share a shape do not."""


class DegenerateSeriesError(SbergsmaError):
    """Self-covariance of a series is (numerically) zero, e.g. a constant series."""


# --- spatial weights errors -------------------------------------------------

class RegionIndexError(SbergsmaError):
    """Region index outside [1, R]."""


class SelfLoopError(SbergsmaError):
    """Edge list contains a self-loop; the diagonal of W must be zero."""


class DuplicatePointError(SbergsmaError):
    """Two region coordinates coincide; inverse distance is undefined."""


class SizeError(SbergsmaError):
    """Dimension too small (e.g. fewer than 2 regions)."""


class IsolatedRegionError(SbergsmaError):
    """Row standardization hit one or more all-zero rows."""


class NegativeWeightError(SbergsmaError):
    """Proximity weights must be nonnegative."""


# --- panel / statistic errors -----------------------------------------------

class DegenerateRegionError(SbergsmaError):
    """A panel column is constant; its Bergsma self-covariance vanishes."""


# --- null distribution errors -----------------------------------------------

class UnsupportedDistributionError(SbergsmaError):
    """Distribution family outside the supported reference set."""


class ConvergenceError(SbergsmaError):
    """Numerical approximation failed its internal consistency check."""


class SpectraMismatchError(SbergsmaError):
    """Number of eigen spectra does not match the number of regions."""


class EmptyNullError(SbergsmaError):
    """Null distribution has no samples."""


# --- dependence model errors ------------------------------------------------

class SingularSystemError(SbergsmaError):
    """I - theta*W is singular or numerically close to singular."""


class InvalidParameterError(SbergsmaError):
    """Model parameter outside its admissible range."""


# --- time series errors -----------------------------------------------------

class RankDeficientError(SbergsmaError):
    """Autoregressive design matrix is rank deficient."""


class ShortSeriesError(SbergsmaError):
    """Series too short for the requested AR order."""


class LagError(SbergsmaError):
    """Requested lag not smaller than the series length."""


class SampleSizeError(SbergsmaError):
    """Too few samples for the requested moment summary."""


# --- inference errors -------------------------------------------------------

class TooManyDegenerateResamplesError(SbergsmaError):
    """Bootstrap redraw budget exhausted by degenerate resamples."""


# --- I/O errors -------------------------------------------------------------

class ParseError(SbergsmaError):
    """Malformed input file; message names the offending location."""


class RaggedRowError(ParseError):
    """CSV rows have inconsistent lengths."""


class NonNumericError(ParseError):
    """A cell expected to be numeric is not."""


class NotSquareError(ParseError):
    """Dense weight matrix file is not square."""


class NonzeroDiagonalError(ParseError):
    """Dense weight matrix file has a nonzero diagonal entry."""
