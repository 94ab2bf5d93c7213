"""Exception types shared across the library."""


class MfriskError(Exception):
    """Base class for all library-specific errors."""


class DomainError(MfriskError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NonConvergence(MfriskError, RuntimeError):
    """A truncated series or iteration failed to meet its tolerance."""


class GridError(MfriskError, ValueError):
    """Grids are mismatched, non-uniform, or otherwise unusable."""


class NumericalInstability(MfriskError, RuntimeError):
    """Two internal evaluations of the same quantity disagree too much."""


class RangeError(MfriskError, RuntimeError):
    """An iterate left the admissible range."""


class ExtendNeeded(MfriskError, RuntimeError):
    """A subordinator path does not cover the requested horizon."""


class ConfigMismatch(MfriskError, ValueError):
    """Configuration fields are mutually inconsistent."""


class CrossCheckFailure(MfriskError, RuntimeError):
    """Independent computation routes disagree beyond tolerance."""


class FitError(MfriskError, ValueError):
    """A regression input is unusable (e.g. non-positive correlations)."""


class NotSubexponential(MfriskError, ValueError):
    """The claim model is not in the subexponential class."""
