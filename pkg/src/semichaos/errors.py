"""Exception types shared across the package."""


class SemichaosError(Exception):
    """Base class for all package errors."""


class ParameterError(SemichaosError, ValueError):
    """Invalid or inconsistent parameters."""


class DomainError(ParameterError):
    """Argument outside the mathematical domain of a function."""


class PoleError(DomainError):
    """Evaluation at a removable or genuine singularity without a limit rule."""


class UnsupportedError(ParameterError):
    """Combination of options the toolkit does not implement."""


class EnvelopeError(SemichaosError, OverflowError):
    """Evaluation envelope exceeded (overflow, underflow or non-convergence)."""
