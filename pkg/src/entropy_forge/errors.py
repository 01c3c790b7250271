"""Exception taxonomy shared by all entropy-forge modules."""


class EntropyForgeError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(EntropyForgeError, ValueError):
    """A configuration value violates its documented constraints."""


class RateOverflowError(ParameterError):
    """An effective event rate is not representable as a finite float."""


class InsufficientDataError(EntropyForgeError, ValueError):
    """The input carries too few samples for the requested computation."""


class ValidationError(EntropyForgeError, ValueError):
    """A structural requirement on the input data does not hold."""


class ScalingRegionError(EntropyForgeError, RuntimeError):
    """No acceptable scaling region was found for a power-law fit.

    Carries a ``diagnostics`` dict (grid, correlation-integral values,
    local slopes) so callers can inspect why the fit was rejected.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class IntegrationError(EntropyForgeError, RuntimeError):
    """Numerical integration produced a non-finite state."""


class SourceExhaustedError(EntropyForgeError, RuntimeError):
    """The backing random stream ran out of bits.

    Raised instead of recycling bits; consumers must provision enough
    stream material up front.
    """


class ConvergenceError(EntropyForgeError, RuntimeError):
    """An iterative solver did not converge within its iteration cap."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations
