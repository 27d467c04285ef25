"""Exception types shared across the package."""


class LevyOUError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LevyOUError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateSampleError(LevyOUError, ValueError):
    """A sample carries no usable information (constant series, zero variance)."""


class PositivityError(LevyOUError, ValueError):
    """An operation requiring strictly positive path values saw a nonpositive one."""


class FitError(LevyOUError, ValueError):
    """Moment fitting failed, e.g. nonpositive mean for a positive-valued family."""
