"""Exception types raised by the library."""


class StableFracError(ValueError):
    """Base class for all validation errors raised by this package."""


class DomainError(StableFracError):
    """An argument lies outside the domain where a formula is defined."""


class SingularFrequencyError(StableFracError):
    """A negative power of ``|u|`` was requested at ``u = 0``."""


class LizorkinError(StableFracError):
    """A spectral input has a nonzero coefficient at zero frequency."""


class DegenerateError(StableFracError):
    """A denominator in a closed-form expression vanishes."""


class MethodError(StableFracError):
    """The requested numerical method cannot handle the input."""
