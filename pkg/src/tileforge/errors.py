"""Exception hierarchy shared by every tileforge module."""


class TileforgeError(Exception):
    """Base class for all library errors."""


class DimensionError(TileforgeError, ValueError):
    """Operands have incompatible shapes."""


class SingularMatrixError(TileforgeError, ZeroDivisionError):
    """A matrix that must be invertible has determinant zero."""


class RankError(TileforgeError, ValueError):
    """Generators do not span a full-rank lattice."""


class NoSolutionError(TileforgeError, ValueError):
    """Inconsistent linear system."""


class OutOfScopeError(TileforgeError):
    """Input matrix lies outside what the library handles (exit code 2)."""


class NotRationalSpectrum(OutOfScopeError):
    """Characteristic polynomial has a non-linear irreducible factor over Z."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotADilation(OutOfScopeError):
    """Some eigenvalue has absolute value <= 1."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NonConvergence(TileforgeError):
    """Fixed-point iteration did not settle (possible stretched tile)."""


class BudgetExceeded(TileforgeError):
    """A point enumeration would exceed the configured budget (exit code 3)."""

    def __init__(self, message, requested=None, budget=None):
        super().__init__(message)
        self.requested = requested
        self.budget = budget


class CertificateFailure(TileforgeError):
    """A block shell certificate check did not hold."""

    def __init__(self, message, check=None, certificate=None):
        super().__init__(message)
        self.check = check
        self.certificate = certificate


class InvariantViolation(TileforgeError, AssertionError):
    """An internal consistency check failed; indicates a bug."""


class UnsupportedDimension(DimensionError):
    """Operation only defined for a specific dimension (e.g. 2-D rendering)."""
