"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``UsageError`` -> 2, every other
``EtaError`` -> 3.
"""

from __future__ import annotations


class EtaError(Exception):
    """Base class for all numeric/domain failures raised by the package."""


class UsageError(EtaError, ValueError):
    """Invalid parameters supplied by the caller (bad config, bad range)."""


class DomainError(EtaError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Argument too close to a pole."""


class SingularityError(DomainError):
    """Argument too close to a singular point of a factor."""


class AccuracyError(EtaError):
    """A truncated series did not reach the requested tolerance.

    The best available value and its error estimate are kept so callers can
    still inspect or report them.
    """

    def __init__(self, message, value=None, est_error=None):
        super().__init__(message)
        self.value = value
        self.est_error = est_error


class ConvergenceError(EtaError):
    """An iteration (Newton, bisection) failed to converge."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class ConsistencyError(EtaError):
    """An internal identity that must hold to rounding accuracy was violated."""


class ZeroOnBoundaryError(DomainError):
    """A contour passes through (or too close to) a zero of the integrand."""


class WindingError(EtaError):
    """Accumulated winding number is not close enough to an integer."""
