"""Exception types shared across the library."""


class TraceLabError(Exception):
    """Base class for all tracelab-specific errors."""


class DimensionMismatchError(TraceLabError, ValueError):
    """Operands have incompatible shapes or dimensions."""


class DomainError(TraceLabError, ValueError):
    """A spectrum, argument, or function value escapes its allowed domain."""


class SingularMatrixError(DomainError):
    """Matrix is singular, or numerically indistinguishable from singular."""


class NotCommutingError(TraceLabError, ValueError):
    """Input matrices fail the pairwise commutation tolerance."""


class NumericalFailureError(TraceLabError, RuntimeError):
    """An internal numerical routine missed its accuracy contract.

    The offending residual, when known, is attached as ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MeanConvergenceError(NumericalFailureError):
    """The epsilon-regularized operator mean did not reach a stable limit."""
