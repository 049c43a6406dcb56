class LFWaveletError(Exception):
    """Base class for all library errors."""


class ConfigurationError(LFWaveletError, ValueError):
    pass


class PrecisionError(LFWaveletError, ArithmeticError):
    """A result depends on coefficients beyond the tracked precision."""


class WindowError(LFWaveletError, ArithmeticError):
    """A nonzero coefficient would fall below the configured exponent floor."""


class ResolutionError(LFWaveletError, ValueError):
    """A grid is too coarse for the integrand to be constant on its cells."""


class WindowOverflowError(LFWaveletError, ValueError):
    def __init__(self, message, clipped=()):
        super().__init__(message)
        self.clipped = list(clipped)


class OutOfLambdaError(LFWaveletError, ValueError):
    """Raised in strict mode when a translate leaves the index set."""
