"""Exception hierarchy shared by all modules."""


class SharpLDPError(Exception):
    """Base class for every error raised by this package."""


class ModelError(SharpLDPError, ValueError):
    """Inconsistent transition matrix, potential table or recoding request."""


class DomainError(SharpLDPError, ValueError):
    """A parameter lies outside the set where the quantity is defined."""


class DegenerateError(DomainError):
    """The observable is cohomologous to a constant (zero variance, trivial interval)."""


class ResourceError(SharpLDPError, RuntimeError):
    """An enumeration or table would exceed its budget.

    ``suggestion`` carries a human-readable parameter adjustment.
    """

    def __init__(self, message, suggestion=None):
        super().__init__(message)
        self.suggestion = suggestion


class ConvergenceError(SharpLDPError, RuntimeError):
    """An iterative solver did not reach its tolerance."""


class ConsistencyError(SharpLDPError, AssertionError):
    """Two independent routes to the same number disagree beyond tolerance."""
