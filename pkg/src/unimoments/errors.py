"""Exception hierarchy.

The CLI maps each family onto an exit code, so every error raised by the
library derives from one of the four base classes below.
"""


class UnimomentsError(Exception):
    """Base class for all library errors."""


class ValidationError(UnimomentsError, ValueError):
    """Input fails a structural invariant (exit code 2)."""


class DomainError(UnimomentsError, ValueError):
    """Input is well formed but outside an operation's precondition (exit code 3)."""


class ResourceError(UnimomentsError):
    """A size cap would be exceeded (exit code 4)."""


class NumericalError(UnimomentsError, ArithmeticError):
    """An internal numerical procedure failed (exit code 5)."""


class NotHermitian(ValidationError):
    def __init__(self, index, defect):
        self.index = index
        self.defect = defect
        super().__init__(f"matrix is not Hermitian: |m[i,j] - conj(m[j,i])| = {defect:.3e} at {index}")


class NotUnitDiagonal(ValidationError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"diagonal entry {index} equals {value!r}, expected 1")


class NotPSD(ValidationError):
    def __init__(self, min_eigenvalue):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.6e}")


class NotSquare(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotUnimodular(ValidationError):
    pass


class NotPermutation(ValidationError):
    pass


class WeightsNotNormalized(ValidationError):
    pass


class NotUnitary(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class ZeroVector(DomainError):
    pass


class NotReal(DomainError):
    pass


class WrongInput(DomainError):
    pass


class DimensionTooSmall(DomainError):
    pass


class SupportTooLarge(DomainError):
    pass


class DegenerateDirection(DomainError):
    pass


class NotInSupport(DomainError):
    pass


class DimensionCap(ResourceError):
    pass


class SizeOverflow(ResourceError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, sweeps, residual):
        self.sweeps = sweeps
        self.residual = residual
        super().__init__(f"Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})")


class RecursionOverflow(NumericalError):
    pass
