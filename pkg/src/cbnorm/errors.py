"""Exception hierarchy shared by every module of the package."""


class CBNormError(Exception):
    """Base class for all errors raised by :mod:`cbnorm`."""


class DimensionError(CBNormError, ValueError):
    """Matrix shapes are inconsistent with the declared dimensions."""


class ValidationError(CBNormError, ValueError):
    """An input violates a precondition (non-unitary matrix, bad parameter, ...)."""


class ConditioningError(CBNormError, ArithmeticError):
    """A mixing matrix is numerically singular."""


class SpanError(CBNormError, ArithmeticError):
    """A vector does not lie in the span of the supplied basis."""


class InconsistencyError(CBNormError, RuntimeError):
    """Two independent computations of the same quantity disagree."""


class InternalError(CBNormError, RuntimeError):
    """An internal loop exceeded its safety cap."""
