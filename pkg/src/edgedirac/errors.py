"""Exception types shared across the package."""


class EdgeDiracError(Exception):
    """Base class for all package errors."""


class InvalidGridError(EdgeDiracError):
    """Grid parameters violate L > 0 or N >= 8."""


class MatrixSizeError(EdgeDiracError):
    """More eigenvalues requested than the matrix dimension."""


class ConvergenceError(EdgeDiracError):
    """Iterative solver failed to reach its tolerance."""


class RefineGridError(EdgeDiracError):
    """Requested quantity is not resolved on the current grid."""


class DomainError(EdgeDiracError):
    """Operation applied outside its parameter domain."""


class BracketError(EdgeDiracError):
    """Root bracketing failed where a sign change is guaranteed."""


class InvariantViolationError(EdgeDiracError):
    """A structural invariant did not hold numerically."""


class WidenWindowError(EdgeDiracError):
    """Spectral-flow window touches a dispersion curve at the cutoff."""


class UsageError(EdgeDiracError):
    """Malformed command-line request."""
