"""Exception types shared across the package.

The hierarchy distinguishes *caller* mistakes (bad arguments, points off the
manifold) from *numerical* failures (a quadrature that refused to converge,
a truncation that lost mass).  Callers that want to degrade gracefully can
catch the numerical branch and retry with a bigger grid.
"""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the routine."""


class ConsistencyError(ArithmeticError):
    """An internal cross-check failed badly enough that the result is untrustworthy.

    Raised e.g. when a point drifts off the hyperboloid by more than the
    renormalization budget, or when two independent evaluation routes for the
    same quantity disagree beyond tolerance.
    """


class AccuracyError(RuntimeError):
    """An adaptive quadrature or series hit its resource cap before reaching tolerance.

    Attributes
    ----------
    achieved : float
        The best error estimate at the point of giving up.
    """

    def __init__(self, message: str, achieved: float = float("nan")):
        super().__init__(message)
        self.achieved = achieved


class TruncationError(RuntimeError):
    """A truncated grid discarded more mass than the stated budget allows."""
