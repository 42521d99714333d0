"""Exception types shared across the package.

The CLI maps each of these onto a distinct exit code.
"""


class InfolabError(Exception):
    """Base class for all package errors."""


class InvalidInputError(InfolabError, ValueError):
    """An argument violates a documented precondition."""


class CapacityError(InfolabError):
    """An exact computation would exceed a configured size cap."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class ConvergenceError(InfolabError, ArithmeticError):
    """Quadrature failed to reach the requested tolerance.

    ``value`` and ``estimate`` carry the best result obtained and the
    order-doubling error estimate, so callers can still inspect them.
    """

    def __init__(self, message, value=None, estimate=None):
        super().__init__(message)
        self.value = value
        self.estimate = estimate
