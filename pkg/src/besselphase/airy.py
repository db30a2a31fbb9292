"""Real Airy functions Ai, Bi, Ai', Bi' on [-40, 40].

Methods by range:

* ``|x| <= 1`` and ``-SEAM <= x < 0``: Maclaurin series in extended precision
  (``numpy.longdouble``), which absorbs the cancellation for negative x.
* ``x > 1``: Ai and Ai' from the scaled Macdonald integrals
  ``e^zeta K_nu(zeta) = int_0^inf exp(-zeta (cosh t - 1)) cosh(nu t) dt`` by the
  trapezoidal rule; Bi and Bi' from the Maclaurin series, whose terms are all
  positive there.
* ``x < -SEAM``: the oscillatory asymptotic forms, truncated at their
  smallest term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DOMAIN = 40.0
SEAM = 8.0

_LD = np.longdouble
_C1 = _LD("0.355028053887817239260063186004183176397979174199")
_C2 = _LD("0.258819403792806798405183560189203963479091138354")
_SQRT3 = _LD("1.73205080756887729352744634150587236694280525381")
_SQRT_PI = math.sqrt(math.pi)
_TRAP_NODES = 64
_TRAP_CUTOFF = 45.0


@dataclass(frozen=True)
class AiryValues:
    ai: float
    bi: float
    aip: float
    bip: float


def _maclaurin(x: np.ndarray, nterms: int):
    """Ai, Bi, Ai', Bi' from the power series (four arrays, float64)."""
    x = x.astype(_LD)
    x3 = x ** 3
    f = np.ones_like(x)
    g = x.copy()
    fp = np.zeros_like(x)
    gp = np.ones_like(x)
    tf, tg = np.ones_like(x), x.copy()
    tfp = 0.5 * x * x
    tgp = np.ones_like(x)
    fp = fp + tfp
    for k in range(1, nterms):
        tf = tf * x3 / ((3 * k - 1) * (3 * k))
        tg = tg * x3 / ((3 * k) * (3 * k + 1))
        tgp = tgp * x3 / ((3 * k) * (3 * k - 2))
        f = f + tf
        g = g + tg
        gp = gp + tgp
        if k >= 2:
            tfp = tfp * x3 / ((3 * k - 1) * 3 * (k - 1))
            fp = fp + tfp
    ai = _C1 * f - _C2 * g
    bi = _SQRT3 * (_C1 * f + _C2 * g)
    aip = _C1 * fp - _C2 * gp
    bip = _SQRT3 * (_C1 * fp + _C2 * gp)
    return tuple(np.asarray(v, dtype=float) for v in (ai, bi, aip, bip))


def _scaled_macdonald(zeta: np.ndarray, order: float) -> np.ndarray:
    """e^zeta K_order(zeta) by the trapezoidal rule."""
    top = np.arccosh(1.0 + _TRAP_CUTOFF / zeta) + 2.0
    h = top / _TRAP_NODES
    t = h[:, None] * np.arange(1, _TRAP_NODES + 1)
    s = np.sinh(0.5 * t)
    vals = np.exp(-2.0 * zeta[:, None] * s * s) * np.cosh(order * t)
    return h * (0.5 + vals.sum(axis=1))


def _positive_side(x: np.ndarray):
    zeta = (2.0 / 3.0) * x ** 1.5
    decay = np.exp(-zeta)
    ai = np.sqrt(x / 3.0) / math.pi * _scaled_macdonald(zeta, 1.0 / 3.0) * decay
    aip = -x / (math.pi * math.sqrt(3.0)) * _scaled_macdonald(zeta, 2.0 / 3.0) * decay
    # Bi series: every term positive; about x^1.5 terms before they fall off
    nterms = int(np.max(x) ** 1.5 * 0.5) + 40
    _, bi, _, bip = _maclaurin(x, nterms)
    return ai, bi, aip, bip


def _asym_coeffs(n: int):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n)]
    return np.array(u), np.array(v)


_U, _V = _asym_coeffs(40)


def _asym_sums(zeta: np.ndarray, coeffs: np.ndarray):
    """Even and odd alternating sums, stopped before the smallest term."""
    terms = coeffs[None, :] / zeta[:, None] ** np.arange(coeffs.size)[None, :]
    mags = np.abs(terms)
    # cut where terms start to grow again
    growing = np.diff(mags, axis=1) > 0
    first_growth = np.where(growing.any(axis=1), growing.argmax(axis=1) + 1, coeffs.size)
    keep = np.arange(coeffs.size)[None, :] < first_growth[:, None]
    terms = np.where(keep, terms, 0.0)
    k = np.arange(coeffs.size)
    sign = np.where((k // 2) % 2 == 0, 1.0, -1.0)
    even = (terms * sign * (k % 2 == 0)).sum(axis=1)
    odd = (terms * sign * (k % 2 == 1)).sum(axis=1)
    return even, odd


def _negative_asymptotic(x: np.ndarray):
    t = -x
    zeta = (2.0 / 3.0) * t ** 1.5
    pe, po = _asym_sums(zeta, _U)
    qe, qo = _asym_sums(zeta, _V)
    c = np.cos(zeta - math.pi / 4)
    s = np.sin(zeta - math.pi / 4)
    amp = 1.0 / (_SQRT_PI * t ** 0.25)
    ampd = t ** 0.25 / _SQRT_PI
    ai = amp * (c * pe + s * po)
    bi = amp * (-s * pe + c * po)
    aip = ampd * (s * qe - c * qo)
    bip = ampd * (c * qe + s * qo)
    return ai, bi, aip, bip


def airy_arrays(x, seam: float = SEAM):
    """Vectorized ``(Ai, Bi, Ai', Bi')`` for ``x`` in [-40, 40]."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) > DOMAIN) or np.any(np.isnan(x)):
        raise DomainError(f"Airy evaluation is limited to [-{DOMAIN}, {DOMAIN}]")
    out = [np.empty_like(x) for _ in range(4)]
    pos = x > 1.0
    asym = x < -seam
    series = ~(pos | asym)
    for mask, fn in ((pos, _positive_side), (asym, _negative_asymptotic),
                     (series, lambda v: _maclaurin(v, 60))):
        if np.any(mask):
            for dst, src in zip(out, fn(x[mask])):
                dst[mask] = src
    return tuple(out)


def airy_eval(x: float, seam: float = SEAM) -> AiryValues:
    ai, bi, aip, bip = airy_arrays(np.array([x]), seam=seam)
    return AiryValues(float(ai[0]), float(bi[0]), float(aip[0]), float(bip[0]))


def airy_modulus_sq(x: float) -> float:
    v = airy_eval(x)
    return v.ai * v.ai + v.bi * v.bi


def airy_phase(x) -> np.ndarray:
    """Continuous arg(Ai(x) + i Bi(x)); equal to pi/3 at 0 and to arctan(Bi/Ai) for x >= -1.

    For x < -1 the branch of atan2 nearest the leading oscillatory phase is taken.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ai, bi, _, _ = airy_arrays(x)
    raw = np.arctan2(bi, ai)
    t = np.maximum(-x, 1.0)
    zeta = (2.0 / 3.0) * t ** 1.5
    # Ai + i Bi ~ e^{-i(zeta - pi/4)} (1 + i u_1/zeta) / (sqrt(pi) t^{1/4})
    guess = -(zeta - math.pi / 4) + np.arctan(_U[1] / zeta)
    branch = raw + 2.0 * math.pi * np.round((guess - raw) / (2.0 * math.pi))
    return np.where(x >= -1.0, raw, branch)
