"""Exception types shared across the package."""


class DgspError(Exception):
    """Base class for all library errors."""


class DimensionError(DgspError, ValueError):
    """Shapes or sizes of inputs do not agree."""


class PreconditionError(DgspError, ValueError):
    """An input violates a documented precondition."""


class NumericalError(DgspError, ArithmeticError):
    """A numerical routine failed to produce a usable result."""


class AssumptionError(DgspError, ValueError):
    """A mathematical assumption (invertibility, simple spectra) does not hold."""


class FilterEvaluationError(DgspError, ValueError):
    """A scalar filter function failed on a kernel entry."""


class UndefinedMetricError(DgspError, ValueError):
    """A metric is undefined for the given input (e.g. an all-zero spectrum)."""


class TractabilityError(DgspError, ValueError):
    """Requested computation exceeds the supported problem size."""


class ParseError(DgspError, ValueError):
    """A data file is malformed."""


class ValidationError(DgspError, ValueError):
    """Graph or signal data fails validation."""
