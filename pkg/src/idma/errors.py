"""Exception types shared across the package."""


class IdmaError(Exception):
    """Base class for all package errors."""


class ConfigError(IdmaError):
    """A configuration dict or file is malformed or inconsistent."""


class NonConvergenceError(IdmaError):
    """A quadrature ran out of its evaluation budget before reaching tolerance."""

    def __init__(self, message, evaluations=None, error_estimate=None):
        super().__init__(message)
        self.evaluations = evaluations
        self.error_estimate = error_estimate


class DivergentMomentError(IdmaError):
    """A requested moment of the Levy measure is infinite."""


class EmptyTruncationError(IdmaError):
    """Truncation threshold leaves no jumps: nu({|y| >= eps}) = 0."""


class NotAvailableError(IdmaError):
    """The operation needs kernel data (usually an antiderivative) this kernel lacks."""
