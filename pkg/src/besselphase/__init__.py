"""Modulus and phase of the Bessel functions J_nu, Y_nu.

J = M cos(theta), Y = M sin(theta), with M^2 from Nicholson's integral and theta
from integrating 2/(pi z M^2).  Asymptotic expansions cover each regime of the
(z, nu) quadrant; :mod:`besselphase.spectral` applies the phase to counting
Dirichlet eigenvalues of the unit disk.
"""

from .coords import EvalPoint, Regime, RegimeConfig, classify
from .errors import (BesselPhaseError, BoundaryWarning, BracketError, DomainError,
                     NearIntegerWarning, RegimeError)
from .expansions import ExpansionResult, evaluate_auto
from .oracle import QuadratureSpec, modulus_phase_oracle

__all__ = [
    "EvalPoint", "Regime", "RegimeConfig", "classify", "ExpansionResult", "evaluate_auto",
    "QuadratureSpec", "modulus_phase_oracle", "BesselPhaseError", "DomainError", "RegimeError",
    "BracketError", "NearIntegerWarning", "BoundaryWarning",
]
