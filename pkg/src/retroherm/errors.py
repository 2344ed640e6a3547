"""Exception types raised across the package."""


class RetroError(Exception):
    """Base class for all package errors."""


class OutOfRangeError(RetroError, ValueError):
    """An index or argument exceeds a documented overflow guard."""


class DomainError(RetroError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularSystemError(RetroError, ArithmeticError):
    """A linear system is singular (underdetermined) at the requested point or order."""

    def __init__(self, message, interface=None):
        super().__init__(message)
        self.interface = interface


class IncompatibleSystemError(RetroError, ArithmeticError):
    """A Laurent system has no power-series solution."""

    def __init__(self, message, interface=None):
        super().__init__(message)
        self.interface = interface


class ConvergenceError(RetroError, ArithmeticError):
    """A series or iteration did not converge within its cap."""


class ConsistencyError(RetroError, ArithmeticError):
    """An internal numerical consistency check failed."""


class IllConditionedError(RetroError, ArithmeticError):
    """A least-squares fit is rank deficient."""

    def __init__(self, message, condition=float("inf")):
        super().__init__(message)
        self.condition = condition


class QuadratureError(RetroError, ArithmeticError):
    """A quadrature did not resolve its integrand."""


class AmplificationOverflow(RetroError, ArithmeticError):
    """An inverse multiplier amplified the data beyond the overflow guard."""

    def __init__(self, message, lam=None):
        super().__init__(message)
        self.lam = lam


class NumericalFailure(RetroError, ArithmeticError):
    """A solver produced non-finite values."""


class NotImplementedCoupling(RetroError, NotImplementedError):
    """The requested coupling form is valid but not supported by this solver."""


class ConfigError(RetroError, ValueError):
    """A scenario configuration failed validation."""
