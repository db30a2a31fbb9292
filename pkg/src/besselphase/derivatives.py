"""Derivatives of J and Y from differentiated expansions.

In the Airy band a function of the form ``p(a) Ai(x) + q(a) Ai'(x)`` with
``x = -2^(1/3) a`` stays of that form under d/da, because Ai'' = x Ai:

    d/da (p Ai + q Ai') = (p' + 2^(2/3) a q) Ai + (q' - 2^(1/3) p) Ai'.

The same holds with Bi.  d/dz at fixed nu is nu^(-1/3) d/da, and d/dnu at fixed
z is the lift  (-mu - a mu^3/3) d/da - (mu^3/3) mu d/dmu  in (a, mu).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from . import oracle
from .airy import airy_arrays
from .coords import DEFAULT_CONFIG, EvalPoint, Regime, RegimeConfig
from .errors import DomainError, RegimeError
from .expansions import (
    ABE_MAX_TERMS, CBRT2, FE_MAX_TERMS, OBE_MAX_TERMS, ExpansionResult, _fe_coeff_arrays,
    _poly_array, expand_fe, _polyval, _real_coeff_array, h_min_values,
)

CBRT4 = CBRT2 * CBRT2


class Axis(enum.Enum):
    ARG = "ARG"
    ORDER = "ORDER"


@dataclass(frozen=True)
class DerivativeRequest:
    ell: int
    wrt: Axis = Axis.ARG

    def __post_init__(self):
        cap = 3 if self.wrt is Axis.ARG else 1
        if not (isinstance(self.ell, int) and 0 <= self.ell <= cap):
            raise DomainError(f"derivative order for {self.wrt.value} must be in 0..{cap}")


# --- d/dz of log M^2 per regime -----------------------------------------------

def _dlog_ae(z, nu, nterms):
    mu4 = 4.0 * nu * nu
    inv = 1.0 / (2.0 * z) ** 2
    term, total, dtotal = 1.0, 0.0, 0.0
    for k in range(nterms):
        total += term
        dtotal += -2.0 * k * term / z
        term *= (2 * k + 1) / (2 * k + 2) * (mu4 - (2 * k + 1) ** 2) * inv
    return -1.0 / z + dtotal / total


def _dlog_abe(z, nu, nterms):
    root2 = (z - nu) * (z + nu)
    c = nu / math.sqrt(root2)
    dc = -c ** 3 * z / nu ** 2
    P = Q = dP = dQ = 0.0
    for k in range(nterms):
        coeffs = _real_coeff_array(k)
        val = float(_polyval(coeffs, c)) / nu ** k
        dval = float(_polyval(np.polynomial.polynomial.polyder(coeffs), c)) / nu ** k
        if k % 2 == 0:
            P, dP = P + val, dP + dval
        else:
            Q, dQ = Q + val, dQ + dval
    return -z / root2 + 2.0 * (P * dP + Q * dQ) / (P * P + Q * Q) * dc


def _dlog_obe(z, nu, nterms):
    root2 = (nu - z) * (nu + z)
    t = nu / math.sqrt(root2)
    dt = t ** 3 * z / nu ** 2
    S = dS = 0.0
    for k in range(nterms):
        coeffs = _poly_array(k)
        S += (-1) ** k * float(_polyval(coeffs, t)) / nu ** k
        dS += (-1) ** k * float(_polyval(np.polynomial.polynomial.polyder(coeffs), t)) / nu ** k
    # d(log T)/dz = -d(h_min)/dz = -2 sqrt(nu^2 - z^2)/z
    return -2.0 * math.sqrt(root2) / z + z / root2 + 2.0 * dS / S * dt


def _dlog_oracle(p: EvalPoint, q: oracle.QuadratureSpec = oracle.DEFAULT_QUAD):
    # Richardson-extrapolated central differences of the Nicholson modulus
    h = 1e-2 * min(p.z, 1.0)
    z = np.array([p.z - 2 * h, p.z - h, p.z + h, p.z + 2 * h])
    lm, _ = oracle.log_modulus_sq_array(z, p.nu, q)
    d1 = (lm[2] - lm[1]) / (2 * h)
    d2 = (lm[3] - lm[0]) / (4 * h)
    return (4.0 * d1 - d2) / 3.0


def log_modulus_sq_dz(p: EvalPoint, r) -> float:
    """d/dz log M^2 consistent with the evaluator that produced ``r``."""
    regime = getattr(r, "regime", Regime.CORE)
    terms = getattr(r, "terms_used", {}) or {}
    if regime is Regime.AE:
        return _dlog_ae(p.z, p.nu, terms.get("modulus_sq", 5))
    if regime is Regime.ABE:
        return _dlog_abe(p.z, p.nu, terms.get("modulus_sq", ABE_MAX_TERMS))
    if regime in (Regime.OBE, Regime.OE):
        return _dlog_obe(p.z, p.nu, terms.get("modulus_sq", OBE_MAX_TERMS))
    if regime is Regime.FE:
        jp, yp = fe_derivative_expansion(1, p, terms.get("P", FE_MAX_TERMS))
        return 2.0 * (r.j * jp + r.y * yp) / (r.j * r.j + r.y * r.y)
    return _dlog_oracle(p)


def jy_prime_from_modphase(p: EvalPoint, r, dlog_m2: float | None = None) -> tuple[float, float]:
    """J' and Y' from M, theta, M' and theta' = 2 / (pi z M^2).

    ``r`` is an :class:`ExpansionResult` or an oracle ``ModulusPhase``.
    """
    log_m2 = r.log_modulus_sq if isinstance(r, ExpansionResult) else r.log_modulus_sq.log_value
    if log_m2 > 1400:
        raise RegimeError("M overflows a double; derivative assembly needs M itself")
    if dlog_m2 is None:
        dlog_m2 = log_modulus_sq_dz(p, r)
    m = math.exp(0.5 * log_m2)
    theta_p = 2.0 / (math.pi * p.z) * math.exp(-log_m2)
    off = r.phase_offset
    # cos(theta) = sin(offset), sin(theta) = -cos(offset); exact for tiny offsets
    cos_t, sin_t = math.sin(off), -math.cos(off)
    half = 0.5 * dlog_m2
    return m * (half * cos_t - theta_p * sin_t), m * (half * sin_t + theta_p * cos_t)


# --- transition region ----------------------------------------------------------

def _fe_terms(nu: float, nterms: int, start: int = 0):
    """Per-power pieces of the transition sums as (power of mu, p(a), q(a)).

    J = sum over pieces of mu^m (p Ai + q Ai'),  Y likewise with -Bi, -Bi'.
    Orders ``start <= k < nterms`` are included.
    """
    P, Q = _fe_coeff_arrays()
    pieces = []
    for k in range(start, nterms):
        pieces.append((1 + 2 * k, Polynomial(CBRT2 * P[k]), Polynomial([0.0])))
        pieces.append((3 + 2 * k, Polynomial([0.0]), Polynomial(CBRT4 * Q[k])))
    return pieces


def _d_da(p: Polynomial, q: Polynomial) -> tuple[Polynomial, Polynomial]:
    a = Polynomial([0.0, 1.0])
    return p.deriv() + CBRT4 * a * q, q.deriv() - CBRT2 * p


def _assemble(pieces, mu, a):
    ai, bi, aip, bip = (float(v[0]) for v in airy_arrays(np.array([-CBRT2 * a])))
    j = y = 0.0
    for m, p, q in pieces:
        pv, qv = p(a), q(a)
        j += mu ** m * (pv * ai + qv * aip)
        y -= mu ** m * (pv * bi + qv * bip)
    return j, y


def fe_derivative_expansion(ell: int, p: EvalPoint, nterms: int = FE_MAX_TERMS,
                            cfg: RegimeConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """ell-th z-derivative of (J, Y) from the term-by-term differentiated transition sums."""
    DerivativeRequest(ell, Axis.ARG)
    if not 1 <= nterms <= FE_MAX_TERMS:
        raise DomainError(f"nterms must be in 1..{FE_MAX_TERMS}")
    # same reach and decline rule as the undifferentiated sums
    expand_fe(p, nterms, cfg)
    mu = p.nu ** (-1.0 / 3.0)
    a = (p.z - p.nu) * mu
    pieces = _fe_terms(p.nu, nterms)
    for _ in range(ell):
        pieces = [(m, *_d_da(pp, qq)) for m, pp, qq in pieces]
    j, y = _assemble(pieces, mu, a)
    # each d/dz brings nu^(-1/3) = mu
    return mu ** ell * j, mu ** ell * y


def fe_derivative_error(ell: int, p: EvalPoint, nterms: int = FE_MAX_TERMS,
                        cfg: RegimeConfig = DEFAULT_CONFIG) -> float:
    """Size of the next two omitted orders of the ell-th differentiated sums.

    The parent's estimate does not cover derivatives: an omitted polynomial
    can vanish at some a while its a-derivative does not.
    """
    DerivativeRequest(ell, Axis.ARG)
    if not 1 <= nterms <= FE_MAX_TERMS:
        raise DomainError(f"nterms must be in 1..{FE_MAX_TERMS}")
    expand_fe(p, nterms, cfg)
    mu = p.nu ** (-1.0 / 3.0)
    a = (p.z - p.nu) * mu
    pieces = _fe_terms(p.nu, nterms + 2, start=nterms)
    for _ in range(ell):
        pieces = [(m, *_d_da(pp, qq)) for m, pp, qq in pieces]
    ai, bi, aip, bip = (float(v[0]) for v in airy_arrays(np.array([-CBRT2 * a])))
    size = sum(mu ** m * (abs(pp(a)) * math.hypot(ai, bi) + abs(qq(a)) * math.hypot(aip, bip))
               for m, pp, qq in pieces)
    return mu ** ell * size


def d_dnu_lift(a: float, mu: float) -> tuple[float, float]:
    """Coefficients of d/da and mu d/dmu in d/dnu at fixed z."""
    if not mu > 0:
        raise DomainError("mu must be positive")
    return -mu - a * mu ** 3 / 3.0, -mu ** 3 / 3.0


def dnu_fe(p: EvalPoint, nterms: int = FE_MAX_TERMS,
           cfg: RegimeConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """dJ/dnu and dY/dnu at fixed z in the Airy band."""
    if not 1 <= nterms <= FE_MAX_TERMS:
        raise DomainError(f"nterms must be in 1..{FE_MAX_TERMS}")
    # same reach and decline rule as the undifferentiated sums
    expand_fe(p, nterms, cfg)
    mu = p.nu ** (-1.0 / 3.0)
    a = (p.z - p.nu) * mu
    pieces = _fe_terms(p.nu, nterms)
    coef_a, coef_bmu = d_dnu_lift(a, mu)
    da = [(m, *_d_da(pp, qq)) for m, pp, qq in pieces]
    # mu d/dmu of mu^m f(a) is m mu^m f(a)
    bmu = [(m, m * pp, m * qq) for m, pp, qq in pieces]
    ja, ya = _assemble(da, mu, a)
    jm, ym = _assemble(bmu, mu, a)
    return coef_a * ja + coef_bmu * jm, coef_a * ya + coef_bmu * ym


__all__ = [
    "Axis", "DerivativeRequest", "jy_prime_from_modphase", "log_modulus_sq_dz",
    "fe_derivative_expansion", "fe_derivative_error", "d_dnu_lift", "dnu_fe", "h_min_values",
]
