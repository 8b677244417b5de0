"""Exception hierarchy.

Argument-level problems derive from ``ValueError``; numerical precondition
failures derive from ``PreconditionError`` so the CLI can map them to exit
code 3.
"""


class FavardError(Exception):
    pass


class ArgumentError(FavardError, ValueError):
    pass


class BoundsError(ArgumentError):
    pass


class CurveSpecError(ArgumentError):
    pass


class InsufficientDataError(ArgumentError):
    pass


class PreconditionError(FavardError):
    pass


class AxisMismatchError(PreconditionError):
    pass


class MixedAxisError(PreconditionError):
    """Raised by the quadrature estimator; use the grid or Monte Carlo route."""


class CurvatureZeroError(PreconditionError):
    pass


class OutOfDomainError(PreconditionError):
    pass


class UnsupportedCurveError(PreconditionError):
    pass


class InvariantViolation(FavardError, RuntimeError):
    pass
