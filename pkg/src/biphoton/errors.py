"""Exception hierarchy shared across the package."""


class BiphotonError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGridError(BiphotonError):
    """Grid violates a structural requirement (spacing, count, power of two)."""


class ConvergenceError(BiphotonError):
    """An iterative numerical procedure failed to reach its tolerance.

    Carries the last two estimates so callers can judge how far off it was.
    """

    def __init__(self, message, last_estimate=None, previous_estimate=None):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.previous_estimate = previous_estimate


class UnderResolvedError(BiphotonError):
    """Too few samples to measure the requested feature reliably."""


class WavelengthRangeError(BiphotonError):
    """Wavelength outside a material model's validity range."""


class CrystalSpecError(BiphotonError):
    """Crystal parameters are internally inconsistent or out of range."""


class DegenerateConfigError(BiphotonError):
    """A closed form is undefined for this configuration (e.g. no walk-off)."""


class NoCompressionSolutionError(BiphotonError):
    """No positive fibre length cancels the spectral chirp for these signs."""


class ConfigError(BiphotonError):
    """Run configuration is malformed; message carries the offending key path."""
