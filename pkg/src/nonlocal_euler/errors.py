"""Exception types raised across the package."""


class NonlocalEulerError(Exception):
    """Base class for all package errors."""


class OddGridSize(NonlocalEulerError, ValueError):
    pass


class NonDecayingKernel(NonlocalEulerError, ValueError):
    pass


class QuadratureFailure(NonlocalEulerError, RuntimeError):
    pass


class IndexOutOfRange(NonlocalEulerError, IndexError):
    pass


class GridMismatch(NonlocalEulerError, ValueError):
    pass


class InsufficientCoefficientRange(NonlocalEulerError, ValueError):
    pass


class TailNotResolved(NonlocalEulerError, RuntimeError):
    pass


class NegativeTime(NonlocalEulerError, ValueError):
    pass


class NonFinite(NonlocalEulerError, FloatingPointError):
    """Raised when an evolution produces inf/nan values."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"non-finite values at step {step}")


class MissingSnapshot(NonlocalEulerError, KeyError):
    pass


class InsufficientData(NonlocalEulerError, ValueError):
    pass


class DegenerateVariation(NonlocalEulerError, ValueError):
    pass


class ConfigError(NonlocalEulerError, ValueError):
    pass
