"""Exception types shared across the package."""

from __future__ import annotations


class BesselPhaseError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BesselPhaseError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class RegimeError(BesselPhaseError, ValueError):
    """An asymptotic evaluator was asked for a point outside its regime."""


class QuadratureError(BesselPhaseError, RuntimeError):
    """A quadrature failed to reach its tolerance.

    ``estimate`` carries the last achieved error estimate.
    """

    def __init__(self, message: str, estimate: float = float("nan")):
        super().__init__(message)
        self.estimate = estimate


class BracketError(BesselPhaseError, RuntimeError):
    """Root bracketing failed; the message carries the diagnostics."""


class NearIntegerWarning(UserWarning):
    """A counted phase or lattice value sits within tolerance of an integer."""


class BoundaryWarning(UserWarning):
    """A lattice point lies within tolerance of the boundary of the scaled domain."""
