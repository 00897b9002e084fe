"""Exception types raised by the solvers."""


class LogSpikeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LogSpikeError, ValueError):
    """An argument or an intermediate value lies outside a function's domain."""


class ConfigurationError(LogSpikeError, ValueError):
    """A numerical setting (tolerance, grid size, ...) is out of range."""


class StiffnessError(LogSpikeError, ArithmeticError):
    """The adaptive integrator needed a step below its underflow limit."""


class BracketError(LogSpikeError):
    """No sign change of the matching function was found for level ``n``."""

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class StateError(LogSpikeError):
    """An object was used before it reached a valid (converged) state."""


class ApproximationDomainError(LogSpikeError, ValueError):
    """The turning point of an approximation lies outside the well."""
