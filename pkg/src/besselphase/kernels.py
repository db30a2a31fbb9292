"""Array kernels for G(x) = exp(x) K_0(x) and the Nicholson exponent.

For ``x <= 2`` the ascending series of K_0 is used.  Above that G comes from
the integral ``G(x) = int_0^inf exp(-x (cosh t - 1)) dt`` evaluated with the
trapezoidal rule; the integrand is entire and decays double-exponentially, so
the rule converges geometrically once the step is below ``0.5/sqrt(x)``.
"""

from __future__ import annotations

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061
_SERIES_CUT = 2.0
_TRAP_NODES = 28
# exp(-45) ~ 3e-20: beyond this the trapezoid integrand is dropped
_TRAP_CUTOFF = 45.0

_k = np.arange(1, 19)
_INV_FACT_SQ = np.cumprod(1.0 / (_k * _k))
_HARMONIC = np.cumsum(1.0 / _k)


def _k0_series(x: np.ndarray) -> np.ndarray:
    q = 0.25 * x * x
    powers = q[..., None] ** _k
    i0 = 1.0 + (powers * _INV_FACT_SQ).sum(axis=-1)
    tail = (powers * (_INV_FACT_SQ * _HARMONIC)).sum(axis=-1)
    return -(np.log(0.5 * x) + EULER_GAMMA) * i0 + tail


def _g_trapezoid(x: np.ndarray) -> np.ndarray:
    top = np.arccosh(1.0 + _TRAP_CUTOFF / x)
    h = top / _TRAP_NODES
    t = h[..., None] * np.arange(1, _TRAP_NODES + 1)
    # cosh(t) - 1 written as 2 sinh^2(t/2) to keep small-t accuracy
    s = np.sinh(0.5 * t)
    vals = np.exp(-2.0 * x[..., None] * s * s)
    return h * (0.5 + vals.sum(axis=-1))


def g_array(x: np.ndarray) -> np.ndarray:
    """G(x) = e^x K_0(x) elementwise for x > 0 (no overflow for large x)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= _SERIES_CUT
    if np.any(small):
        xs = x[small]
        out[small] = np.exp(xs) * _k0_series(xs)
    if np.any(~small):
        out[~small] = _g_trapezoid(x[~small])
    return out


def log_g_array(x: np.ndarray) -> np.ndarray:
    """log G(x), accurate also where x underflows towards 0."""
    return np.log(g_array(x))


def nicholson_exponent(z, nu, t):
    """h(z, nu, t) = 2 z sinh t - 2 nu t."""
    return 2.0 * z * np.sinh(t) - 2.0 * nu * t


def sinh_minus_id(d):
    """sinh(d) - d without cancellation near 0."""
    d = np.asarray(d, dtype=float)
    d2 = d * d
    series = np.zeros_like(d)
    # d^3/3! + d^5/5! + ... through d^19
    for k in range(9, 0, -1):
        series = series * d2 / ((2 * k + 2) * (2 * k + 3)) + 1.0
    series = series * d * d2 / 6.0
    return np.where(np.abs(d) < 0.5, series, np.sinh(d) - d)


def order_excess(z, nu):
    """sqrt((nu/z)^2 - 1) for nu >= z, using the exact difference nu - z."""
    return np.sqrt(np.maximum(nu - z, 0.0) * (nu + z)) / z


def shifted_exponent(z, nu, t, t_peak):
    """h(z, nu, t) - h_min, evaluated without cancellation.

    For nu > z, with d = t - t*, cosh t* = nu/z:
        h - h_min = 2 z [sinh t* (cosh d - 1) + cosh t* (sinh d - d)].
    For nu <= z (no shift): h = 2 (z - nu) t + 2 z (sinh t - t).
    """
    above = nu > z
    d = t - t_peak
    half = np.sinh(0.5 * d)
    r = np.where(above, nu / z, 1.0)
    q = np.where(above, order_excess(z, nu), 0.0)
    inside = 2.0 * z * (q * 2.0 * half * half + r * sinh_minus_id(d))
    outside = 2.0 * (z - nu) * t + 2.0 * z * sinh_minus_id(t)
    return np.where(above, inside, outside)


# Taylor coefficients of q - sqrt(1+q^2) asinh(q) = q^3 sum_k c_k q^(2k), from
# differentiating: c_k = (-1)^(k+1) 4^k (k!)^2 / ((2k+1)! (2k+3))
_HMIN_SERIES = [
    (-1) ** (k + 1) * 4 ** k * math.factorial(k) ** 2 / (math.factorial(2 * k + 1) * (2 * k + 3))
    for k in range(40)
]
_HMIN_SWITCH = 0.5


def h_min_values(z: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """Minimum over t of h(z, nu, t) for nu > z (cancellation-safe near nu = z).

    ``h_min = 2 z (q - r asinh q)`` with ``r = nu/z`` and ``q = sqrt(r^2 - 1)``.
    For small q the bracket is replaced by its Taylor series in q.
    """
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    r = nu / z
    q = order_excess(z, nu)
    small = q < _HMIN_SWITCH
    qs = np.where(small, q, 0.0)
    q2 = qs * qs
    series = np.zeros_like(qs)
    for c in _HMIN_SERIES[::-1]:
        series = series * q2 + c
    series = series * qs * q2
    bracket = np.where(small, series, q - r * np.arcsinh(q))
    return 2.0 * z * bracket


def log_k0_scalar(x: float) -> float:
    return math.log(float(g_array(np.array([x]))[0])) - x
