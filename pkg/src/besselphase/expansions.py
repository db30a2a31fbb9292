"""Asymptotic evaluators for M^2 and theta, one per regime, plus dispatch.

Every evaluator has a vectorized core (``*_arrays``) used by the counting code
and a scalar wrapper returning :class:`ExpansionResult`.  Error estimates are
the size of the first omitted term: relative for M^2, absolute for theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import oracle
from .airy import airy_arrays, airy_phase
from .coords import DEFAULT_CONFIG, EvalPoint, Regime, RegimeConfig, classify, to_compact
from .errors import DomainError, RegimeError
from .kernels import h_min_values
from .oracle import LogScaled
from .polys import debye_poly, debye_real_coeffs, transition_polys

CBRT2 = 2.0 ** (1.0 / 3.0)
HALF_PI = 0.5 * math.pi

AE_MAX_TERMS = 5
ABE_MAX_TERMS = 3
FE_MAX_TERMS = 3
OBE_MAX_TERMS = 2
DEBYE_MAX_K = 4
FE_POLY_MAX_K = 2
# the Airy band evaluator accepts |a| up to this multiple of fe_halfwidth
FE_SAFETY = 4.0
# relative size of the omitted terms at which the Airy band evaluator declines
FE_DECLINE = 1.0


@dataclass(frozen=True)
class ExpansionResult:
    modulus_sq: float | LogScaled
    phase: float
    regime: Regime
    terms_used: dict = field(default_factory=dict)
    err_estimate: float = 0.0
    j: float | None = None
    y: float | None = None
    # theta + pi/2, kept separately because it can be far below ulp(theta)
    phase_offset: float = math.nan
    err_modulus_sq: float = 0.0
    err_phase: float = 0.0
    exponentially_small_phase: bool = False

    @property
    def log_modulus_sq(self) -> float:
        if isinstance(self.modulus_sq, LogScaled):
            return self.modulus_sq.log_value
        return math.log(self.modulus_sq)


@dataclass(frozen=True)
class DebyeBeta:
    """sec(beta) = z/nu and xi = nu (tan beta - beta) - pi/4."""

    beta: float
    xi: float


def _check_terms(nterms: int, cap: int, name: str) -> int:
    if not (isinstance(nterms, (int, np.integer)) and 1 <= nterms <= cap):
        raise DomainError(f"{name} supports 1..{cap} terms, got {nterms!r}")
    return int(nterms)


# reported estimates never drop below what double rounding alone can cause
ROUNDING_FLOOR = 8 * np.finfo(float).eps


def _wrap_result(regime, log_m2, offset, err_m, err_th, terms, j=None, y=None,
                 exp_small=False) -> ExpansionResult:
    log_m2 = float(log_m2)
    err_m = max(float(err_m), ROUNDING_FLOOR)
    err_th = max(float(err_th), ROUNDING_FLOOR * max(1.0, abs(float(offset))))
    m2 = LogScaled(log_m2) if log_m2 > 700 or log_m2 < -700 else math.exp(log_m2)
    return ExpansionResult(
        modulus_sq=m2,
        phase=float(offset) - HALF_PI,
        regime=regime,
        terms_used=terms,
        err_estimate=float(max(err_m, err_th)),
        j=j,
        y=y,
        phase_offset=float(offset),
        err_modulus_sq=float(err_m),
        err_phase=float(err_th),
        exponentially_small_phase=exp_small,
    )


# --- large argument -----------------------------------------------------------

def _log_hankel_coeffs(nu: np.ndarray, order: int) -> list[np.ndarray]:
    """Coefficients l_1..l_order of log(sum_k i^k a_k(nu) w^k) as a series in w."""
    mu4 = 4.0 * nu * nu
    s = [np.ones_like(nu, dtype=complex)]
    a = np.ones_like(nu)
    for k in range(1, order + 1):
        a = a * (mu4 - (2 * k - 1) ** 2) / (8.0 * k)
        s.append((1j ** k) * a)
    l = [np.zeros_like(s[0])]
    for k in range(1, order + 1):
        acc = k * s[k]
        for j in range(1, k):
            acc = acc - j * l[j] * s[k - j]
        l.append(acc / k)
    return l


def ae_arrays(z, nu, nterms: int = AE_MAX_TERMS):
    """``(log M^2, theta + pi/2, rel err M^2, abs err theta)`` from the large-argument series."""
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    z, nu = np.broadcast_arrays(z, nu)
    mu4 = 4.0 * nu * nu
    inv = 1.0 / (2.0 * z) ** 2
    term = np.ones_like(z)
    total = np.zeros_like(z)
    for k in range(1, nterms + 1):
        total = total + term
        term = term * (2 * k - 1) / (2 * k) * (mu4 - (2 * k - 1) ** 2) * inv
    err_m = np.abs(term / total)
    log_m2 = np.log(2.0 / (math.pi * z)) + np.log(total)

    l = _log_hankel_coeffs(nu, 2 * nterms + 1)
    w = 1.0 / z
    corr = np.zeros_like(z)
    for j in range(1, nterms + 1):
        corr = corr + l[2 * j - 1].imag * w ** (2 * j - 1)
    err_th = np.abs(l[2 * nterms + 1].imag * w ** (2 * nterms + 1))
    # theta + pi/2 = z - (nu/2 - 1/4) pi + corrections
    offset = z - (0.5 * nu - 0.25) * math.pi + corr
    return log_m2, offset, err_m, err_th


def expand_ae(p: EvalPoint, nterms: int = AE_MAX_TERMS) -> ExpansionResult:
    """Large-argument expansion.

    ``nterms`` counts the terms kept in the M^2 sum (the leading one included)
    and the correction terms added to ``z - (nu/2 + 1/4) pi`` in theta.
    """
    nterms = _check_terms(nterms, AE_MAX_TERMS, "expand_ae")
    log_m2, off, em, et = ae_arrays(p.z, p.nu, nterms)
    return _wrap_result(Regime.AE, log_m2, off, em, et, {"modulus_sq": nterms, "phase": nterms})


# --- Debye, oscillatory side ---------------------------------------------------

@lru_cache(maxsize=None)
def _real_coeff_array(k: int) -> np.ndarray:
    return np.array([float(c) for c in debye_real_coeffs(k)])


@lru_cache(maxsize=None)
def _poly_array(k: int) -> np.ndarray:
    return np.array([float(c) for c in debye_poly(k)])


def _polyval(coeffs: np.ndarray, x):
    acc = np.zeros_like(np.asarray(x, dtype=float))
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


def debye_beta(p: EvalPoint) -> DebyeBeta:
    if not (p.z > p.nu > 0):
        raise RegimeError(f"Debye angle needs z > nu > 0, got z={p.z}, nu={p.nu}")
    root = math.sqrt((p.z - p.nu) * (p.z + p.nu))
    s = root / p.nu
    beta = math.atan(s)
    return DebyeBeta(beta=beta, xi=float(_xi(np.array(p.nu), np.array(s))))


def debye_u(k: int, beta: DebyeBeta) -> float:
    """Real multiplier u_k(beta) in the oscillatory Debye forms (a polynomial in cot beta)."""
    if not (isinstance(k, (int, np.integer)) and 0 <= k <= DEBYE_MAX_K):
        raise DomainError(f"debye_u supports k in 0..{DEBYE_MAX_K}, got {k!r}")
    c = math.cos(beta.beta) / math.sin(beta.beta)
    return float(_polyval(_real_coeff_array(int(k)), c))


def _s_minus_atan(s: np.ndarray) -> np.ndarray:
    """s - arctan(s) without cancellation at small s."""
    s2 = s * s
    series = np.zeros_like(s)
    for k in range(12, 0, -1):
        series = series * (-s2) + 1.0 / (2 * k + 1)
    series = series * s * s2
    return np.where(s < 0.1, series, s - np.arctan(s))


def _xi(nu, s):
    return nu * _s_minus_atan(s) - 0.25 * math.pi


def abe_arrays(z, nu, nterms: int = ABE_MAX_TERMS):
    """``(log M^2, theta + pi/2, rel err M^2, abs err theta)`` from the oscillatory Debye forms.

    J = pref (P cos xi + Q sin xi),  Y = pref (P sin xi - Q cos xi),
    so theta = xi - atan2(Q, P) and M^2 = pref^2 (P^2 + Q^2).
    """
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    z, nu = np.broadcast_arrays(z, nu)
    root = np.sqrt((z - nu) * (z + nu))
    c = nu / root
    s = root / nu
    P = np.zeros_like(z)
    Q = np.zeros_like(z)
    for k in range(nterms):
        term = _polyval(_real_coeff_array(k), c) / nu ** k
        if k % 2 == 0:
            P = P + term
        else:
            Q = Q + term
    nxt = np.abs(_polyval(_real_coeff_array(nterms), c) / nu ** nterms)
    norm = np.hypot(P, Q)
    err_th = nxt / norm
    err_m = 2.0 * err_th
    log_m2 = np.log(2.0 / (math.pi * root)) + 2.0 * np.log(norm)
    # theta + pi/2 = xi + pi/2 - atan2(Q, P) = nu (s - atan s) + pi/4 - atan2(Q, P)
    offset = nu * _s_minus_atan(s) + 0.25 * math.pi - np.arctan2(Q, P)
    return log_m2, offset, err_m, err_th


def expand_abe(p: EvalPoint, nterms: int = ABE_MAX_TERMS) -> ExpansionResult:
    """Debye expansion for z > nu; ``nterms`` counts the u_k kept (u_0 included)."""
    nterms = _check_terms(nterms, ABE_MAX_TERMS, "expand_abe")
    if not (p.z > p.nu > 0):
        raise RegimeError(f"expand_abe needs z > nu > 0, got z={p.z}, nu={p.nu}")
    log_m2, off, em, et = abe_arrays(p.z, p.nu, nterms)
    return _wrap_result(Regime.ABE, log_m2, off, em, et, {"modulus_sq": nterms, "phase": nterms})


# --- transition region ---------------------------------------------------------

@lru_cache(maxsize=None)
def _fe_coeff_arrays() -> tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    # two orders beyond the public cap, used only for the omitted-term estimate
    P, Q = transition_polys(FE_MAX_TERMS + 2)
    to_arr = lambda poly: np.array([float(c) for c in poly]) if poly else np.zeros(1)
    return tuple(to_arr(x) for x in P), tuple(to_arr(x) for x in Q)


def fe_polynomials(k: int, a: float) -> tuple[float, float]:
    """(P_k(a), Q_k(a)) of the Airy-type transition expansion."""
    if not (isinstance(k, (int, np.integer)) and 0 <= k <= FE_POLY_MAX_K):
        raise DomainError(f"fe_polynomials supports k in 0..{FE_POLY_MAX_K}, got {k!r}")
    P, Q = _fe_coeff_arrays()
    return float(_polyval(P[k], a)), float(_polyval(Q[k], a))


def _fe_sums(a, eps, nterms):
    """Truncated sums p, q and the sizes of the next two omitted (P, q) terms.

    Two orders are used because odd-degree polynomials make a single omitted
    term vanish at isolated a (P_2(0) = Q_2(0) = 0, for instance).
    """
    P, Q = _fe_coeff_arrays()
    p = np.zeros_like(a)
    q = np.zeros_like(a)
    power = np.ones_like(a)
    for k in range(nterms):
        p = p + _polyval(P[k], a) * power
        q = q + _polyval(Q[k], a) * power
        power = power * eps
    p_next = np.abs(_polyval(P[nterms], a)) * power + np.abs(_polyval(P[nterms + 1], a)) * power * eps
    q_next = eps * power * (np.abs(_polyval(Q[nterms], a)) + np.abs(_polyval(Q[nterms + 1], a)) * eps)
    return p, eps * q, p_next, q_next


def fe_arrays(z, nu, nterms: int = FE_MAX_TERMS):
    """``(J, Y, log M^2, theta + pi/2, rel err M^2, abs err theta)`` in the Airy band.

    J = 2^(1/3) nu^(-1/3) (p Ai(x) + 2^(1/3) q Ai'(x)), Y likewise with -Bi,
    x = -2^(1/3) a.  The branch of theta is the one nearest the leading
    Airy phase, so no oracle input is needed for unwrapping.
    """
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    z, nu = np.broadcast_arrays(z, nu)
    mu = nu ** (-1.0 / 3.0)
    a = (z - nu) * mu
    eps = mu * mu
    x = -CBRT2 * a
    ai, bi, aip, bip = (v.reshape(x.shape) for v in airy_arrays(x))
    p, q, p_next, q_next = _fe_sums(a, eps, nterms)
    pref = CBRT2 * mu
    j = pref * (p * ai + CBRT2 * q * aip)
    y = -pref * (p * bi + CBRT2 * q * bip)
    m2 = j * j + y * y
    m = np.sqrt(m2)
    err_abs = pref * (p_next * np.hypot(ai, bi) + CBRT2 * q_next * np.hypot(aip, bip))
    err_th = err_abs / m
    err_m = 2.0 * err_th
    lead = HALF_PI - airy_phase(x).reshape(x.shape)
    raw = np.arctan2(j, -y)
    offset = raw + 2.0 * math.pi * np.round((lead - raw) / (2.0 * math.pi))
    return j, y, np.log(m2), offset, err_m, err_th


def _fe_guard(p: EvalPoint, cfg: RegimeConfig) -> None:
    if p.nu < cfg.core_nu:
        raise RegimeError(f"expand_fe needs nu >= {cfg.core_nu}, got {p.nu}")
    a = to_compact(p).a
    if abs(a) > FE_SAFETY * cfg.fe_halfwidth:
        raise RegimeError(f"|a| = {abs(a):.4g} is outside the Airy band reach "
                          f"{FE_SAFETY * cfg.fe_halfwidth:g}")


def expand_fe(p: EvalPoint, nterms: int = FE_MAX_TERMS,
              cfg: RegimeConfig = DEFAULT_CONFIG) -> ExpansionResult:
    """Transition-region expansion; ``nterms`` counts the (P_k, Q_k) pairs kept.

    Raises ``RegimeError`` outside the Airy band's reach or when the omitted
    terms are as large as the sum itself.
    """
    nterms = _check_terms(nterms, FE_MAX_TERMS, "expand_fe")
    _fe_guard(p, cfg)
    j, y, log_m2, off, em, et = fe_arrays(p.z, p.nu, nterms)
    if not em < FE_DECLINE:
        raise RegimeError(f"transition series is not asymptotic at z={p.z}, nu={p.nu} "
                          f"(omitted terms ~ {float(em):.3g} of the sum)")
    return _wrap_result(Regime.FE, log_m2, off, em, et, {"P": nterms, "Q": nterms},
                        j=float(j), y=float(y))


# --- exponential side ----------------------------------------------------------

def h_min(p: EvalPoint) -> float:
    """min over t of 2 z sinh t - 2 nu t, for nu > z."""
    if not p.nu > p.z:
        raise DomainError(f"h_min needs nu > z, got z={p.z}, nu={p.nu}")
    return float(h_min_values(np.array(p.z), np.array(p.nu)))


def t_factor(p: EvalPoint) -> LogScaled:
    """T = exp(-h_min), kept as its logarithm."""
    return LogScaled(-h_min(p))


def obe_arrays(z, nu, nterms: int = OBE_MAX_TERMS):
    """``(log M^2, theta + pi/2, rel err M^2)`` from the exponential Debye forms.

    With coth(alpha) = nu / sqrt(nu^2 - z^2):
    Y^2 = 2 T / (pi sqrt(nu^2 - z^2)) (sum (-1)^k u_k / nu^k)^2 and
    J/Y = -(1/2) T^-1 (sum u_k / nu^k) / (sum (-1)^k u_k / nu^k).
    """
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    z, nu = np.broadcast_arrays(z, nu)
    root = np.sqrt((nu - z) * (nu + z))
    t = nu / root
    log_t = -h_min_values(z, nu)
    plus = np.zeros_like(z)
    minus = np.zeros_like(z)
    for k in range(nterms):
        term = _polyval(_poly_array(k), t) / nu ** k
        plus = plus + term
        minus = minus + (-1) ** k * term
    nxt = np.abs(_polyval(_poly_array(nterms), t) / nu ** nterms)
    err_m = 2.0 * nxt / np.abs(minus)
    log_ratio = np.log(np.abs(plus / minus)) - math.log(2.0) - log_t
    log_m2 = (math.log(2.0 / math.pi) + log_t - np.log(root) + 2.0 * np.log(np.abs(minus))
              + np.log1p(np.exp(2.0 * log_ratio)))
    # theta + pi/2 = atan(J / -Y), which is exponentially small here
    offset = np.arctan(np.exp(log_ratio))
    return log_m2, offset, err_m


def expand_obe(p: EvalPoint, nterms: int = OBE_MAX_TERMS) -> ExpansionResult:
    """Debye expansion for nu > z, with M^2 log-scaled.

    The phase is reported as -pi/2; the exponentially small offset is carried
    in ``phase_offset`` and flagged.
    """
    nterms = _check_terms(nterms, OBE_MAX_TERMS, "expand_obe")
    if not p.nu > p.z:
        raise RegimeError(f"expand_obe needs nu > z, got z={p.z}, nu={p.nu}")
    log_m2, off, em = obe_arrays(p.z, p.nu, nterms)
    regime = Regime.OE if classify(p) is Regime.OE else Regime.OBE
    res = _wrap_result(regime, log_m2, off, em, 0.0, {"modulus_sq": nterms}, exp_small=True)
    return ExpansionResult(
        modulus_sq=LogScaled(float(log_m2)),
        phase=-HALF_PI,
        regime=regime,
        terms_used=res.terms_used,
        err_estimate=res.err_estimate,
        phase_offset=res.phase_offset,
        err_modulus_sq=res.err_modulus_sq,
        err_phase=res.phase_offset,
        exponentially_small_phase=True,
    )


# --- dispatch ------------------------------------------------------------------

def from_oracle(p: EvalPoint, q: oracle.QuadratureSpec = oracle.DEFAULT_QUAD) -> ExpansionResult:
    mp = oracle.modulus_phase_oracle(p, q)
    lm = mp.log_modulus_sq.log_value
    return ExpansionResult(
        modulus_sq=LogScaled(lm) if abs(lm) > 700 else math.exp(lm),
        phase=mp.phase,
        regime=Regime.CORE,
        terms_used={},
        err_estimate=max(mp.err_modulus_sq, mp.err_phase),
        j=mp.j if abs(lm) < 700 else None,
        y=mp.y if abs(lm) < 700 else None,
        phase_offset=mp.phase_offset,
        err_modulus_sq=mp.err_modulus_sq,
        err_phase=mp.err_phase,
    )


def evaluate_auto(p: EvalPoint, cfg: RegimeConfig = DEFAULT_CONFIG,
                  q: oracle.QuadratureSpec = oracle.DEFAULT_QUAD) -> ExpansionResult:
    """Classify ``p`` and evaluate with the matching expansion (oracle at CORE).

    On the oscillatory side the large-argument series is used instead of
    Debye when its error estimate is smaller (always at nu = 0).
    """
    regime = classify(p, cfg)
    if regime is Regime.CORE:
        return from_oracle(p, q)
    if regime is Regime.FE:
        return expand_fe(p, FE_MAX_TERMS, cfg)
    if regime in (Regime.OBE, Regime.OE):
        return expand_obe(p, OBE_MAX_TERMS)
    ae = expand_ae(p, AE_MAX_TERMS)
    if p.nu == 0.0:
        return ae
    abe = expand_abe(p, ABE_MAX_TERMS)
    return ae if ae.err_estimate < abe.err_estimate else abe
