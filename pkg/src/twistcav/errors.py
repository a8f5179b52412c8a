"""Exception and warning types shared across the package."""


class TwistCavError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TwistCavError, ValueError):
    """Input outside the physically meaningful domain of an operation."""


class OpticAxisDegeneracyError(DomainError):
    """Wavevector (anti)parallel to the optic axis.

    The ordinary/extraordinary transverse directions are 0/0-degenerate
    there, so no canonical polarization basis exists.  Callers must tilt
    the wavevector off axis.
    """


class StabilityGuardError(TwistCavError, RuntimeError):
    """A time-step or time-window guard was violated."""


class ConvergenceError(TwistCavError, RuntimeError):
    """Iterative refinement failed to converge.

    Carries the last two iterates so callers can judge how far apart
    they are.
    """

    def __init__(self, message, last=None, previous=None):
        super().__init__(message)
        self.last = last
        self.previous = previous


class ConfigError(TwistCavError, ValueError):
    """Malformed or inconsistent scenario configuration."""


class ThresholdError(TwistCavError, RuntimeError):
    """A commanded quality threshold was not met."""


class ValidityWarning(UserWarning):
    """A parameter regime stretches an approximation used by the model."""
