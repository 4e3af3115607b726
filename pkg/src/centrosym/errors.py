"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: precondition-type errors exit with 2,
``NumericalFailure`` with 3 and ``CertificationError`` with 4.
"""


class CentroError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(CentroError, ValueError):
    """An input violates a documented precondition."""


class ShapeError(PreconditionError):
    """Dimensions are inconsistent (non-square input, size mismatch...)."""


class StructureError(PreconditionError):
    """A matrix lacks the required structure (centrosymmetry, nonnegativity)."""

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class MembershipError(PreconditionError):
    """A target list is not an admissible input (not conjugate-closed, ...)."""


class BoundViolation(PreconditionError):
    """A requested Perron decrement exceeds what keeps the matrix nonnegative."""


class InfeasibleError(PreconditionError):
    """No construction of the requested kind exists for these inputs."""


class NumericalFailure(CentroError, ArithmeticError):
    """An iterative numerical procedure did not converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IllConditionedError(NumericalFailure):
    """A diagonal similarity would divide by a (numerically) zero entry."""


class CertificationError(CentroError, AssertionError):
    """A construction failed its own certificate; this indicates a bug."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
