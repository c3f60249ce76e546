"""Exception types shared across the package."""


class FbstError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FbstError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionError(FbstError):
    """Parameter-space and null-set dimensions are inconsistent."""


class DrawsError(FbstError):
    """Posterior draws are missing, malformed, or degenerate."""


class ReferenceFunctionError(FbstError):
    """The reference function is invalid where it must be evaluated."""


class SamplerError(FbstError):
    """The Metropolis sampler failed to tune to a usable acceptance rate."""


class PlotError(FbstError):
    """Plot construction was asked for an empty or inconsistent view."""
