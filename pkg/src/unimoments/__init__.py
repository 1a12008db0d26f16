"""Second-order unitary moment matrices: elliptope extreme points, Clifford
realizations of real correlation matrices, and certificates for the
commuting-moment set."""

from .correlation import CorrelationMatrix, Frame, validate
from .matkernel import DEFAULT_TOL, Tolerance

__all__ = ["CorrelationMatrix", "Frame", "Tolerance", "DEFAULT_TOL", "validate"]
__version__ = "0.1.0"
