"""Exception types raised by fracbvp."""


class FracBVPError(Exception):
    """Base class for all package errors."""


class DomainError(FracBVPError, ValueError):
    """An argument lies outside the domain of the operation."""


class HypothesisError(FracBVPError):
    """A standing hypothesis of the boundary value problem does not hold.

    ``value`` carries the offending quantity (e.g. the multi-point sum).
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class DivergenceError(FracBVPError, ArithmeticError):
    """An integral or an iteration appears not to converge."""


class UnsupportedError(FracBVPError):
    """The requested solve path does not apply to this problem."""


class NumericalError(FracBVPError, ArithmeticError):
    """A linear system could not be solved reliably."""
