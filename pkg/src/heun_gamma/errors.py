"""Exception types raised across the package."""


class HeunGammaError(Exception):
    """Base class for all package-specific errors."""


class PoleError(HeunGammaError):
    """A function was requested at, or too close to, one of its poles."""


class ConvergenceError(HeunGammaError):
    """An iterative evaluation did not converge within its budget."""


class DegenerateError(HeunGammaError):
    """A construction degenerates for the given parameters (e.g. alpha = 0)."""


class NotSingularError(HeunGammaError):
    """The requested point is an ordinary point of the operator."""


class IrregularError(HeunGammaError):
    """The requested point is an irregular singular point."""


class PreconditionError(HeunGammaError):
    """A documented parameter precondition is violated; the message names it."""


class DegenerateIndexError(HeunGammaError):
    """Coefficient generation hit a vanishing leading coefficient with an
    inconsistent right-hand side at ``index``; the caller may switch to
    another admissible exponent."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"degenerate recurrence index n={index}")


class UnsupportedSchemeError(HeunGammaError):
    """The scheme cannot terminate from the right-hand side."""


class NoRootsError(HeunGammaError):
    """The termination polynomial is constant and nonzero: no roots to search."""


class SingularRefError(HeunGammaError):
    """The reference point lies on the zero set alpha*z - q = 0."""


class RegionError(HeunGammaError):
    """The reference point lies outside the guaranteed-convergence region."""


class EvaluationError(HeunGammaError):
    """A series term could not be evaluated to a finite value."""


class SingularPathError(HeunGammaError):
    """An integration path passes too close to a singular point."""


class StepUnderflowError(HeunGammaError):
    """The adaptive integrator's step size underflowed."""


class ParseError(HeunGammaError):
    """A configuration document is malformed; the message carries context."""


class ValidationError(HeunGammaError):
    """A configuration is well-formed but violates a documented precondition."""
