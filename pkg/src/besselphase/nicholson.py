"""Batched evaluation of log M_nu(z)^2 from Nicholson's integral.

    M^2 = (8/pi^2) int_0^inf K_0(2 z sinh t) cosh(2 nu t) dt
        = (4/pi^2) int_0^inf G(x) (e^{-h} + e^{-x-2 nu t}) dt,   x = 2 z sinh t,

with ``h = x - 2 nu t``.  When nu > z the exponent has an interior minimum
``h_min`` at ``t* = acosh(nu/z)``; the integrand is multiplied by ``e^{h_min}``
before integration so nothing overflows, and the integral is split at ``t*``.
"""

from __future__ import annotations

import math

import numpy as np

from .kernels import g_array, h_min_values, order_excess, shifted_exponent
from .quadrature import tanh_sinh_rows

LOG_8_OVER_PI2 = math.log(8.0 / math.pi ** 2)
# integrand dropped where h - shift exceeds this (e^-50 ~ 2e-22)
TRUNCATION_EXPONENT = 50.0


def _bisect_increasing(fun, lo, hi, iters=80):
    """Vectorized bisection for fun(t) = 0 with fun(lo) < 0 <= fun(hi)."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        up = fun(mid) >= 0
        hi = np.where(up, mid, hi)
        lo = np.where(up, lo, mid)
    return 0.5 * (lo + hi)


def integration_limits(z: np.ndarray, nu: np.ndarray, cutoff: float = TRUNCATION_EXPONENT):
    """Return ``(t_lo, t_peak, t_hi, shift)`` for the shifted Nicholson integrand.

    ``shift`` is h_min for nu > z and 0 otherwise; on ``[t_lo, t_hi]`` the
    neglected integrand is below ``exp(-cutoff)`` relative to the peak.
    """
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    above = nu > z
    shift = np.zeros_like(z)
    t_peak = np.zeros_like(z)
    if np.any(above):
        shift[above] = h_min_values(z[above], nu[above])
        q = order_excess(z[above], nu[above])
        t_peak[above] = np.arcsinh(q)

    def excess(t):
        return shifted_exponent(z, nu, t, t_peak) - cutoff

    # right limit: grow the step until the excess turns positive
    step = np.maximum(1.0, t_peak)
    hi = t_peak + step
    for _ in range(200):
        bad = excess(hi) < 0
        if not np.any(bad):
            break
        step = np.where(bad, 2.0 * step, step)
        hi = np.where(bad, t_peak + step, hi)
    # h is increasing on [t_peak, inf); bisect on that branch
    t_hi = _bisect_increasing(excess, t_peak.copy(), hi)

    t_lo = np.zeros_like(z)
    need_left = above & (-shift > cutoff)
    if np.any(need_left):
        # h decreasing on [0, t_peak]: bisect -excess
        def neg(t):
            return -excess(t)
        t_lo = np.where(
            need_left,
            _bisect_increasing(neg, np.zeros_like(z), t_peak.copy()),
            0.0,
        )
    return t_lo, t_peak, t_hi, shift


def log_modulus_sq(z, nu, abs_tol=1e-13, rel_tol=1e-12, max_levels=12):
    """Return ``(log M^2, relative error estimate)`` for arrays ``z``, ``nu``.

    The tolerances apply to the shifted integral, whose size is of order one
    near the peak, so ``rel_tol`` is effectively a relative tolerance on M^2.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    z, nu = np.broadcast_arrays(z, nu)
    z = z.ravel()
    nu = nu.ravel()
    t_lo, t_peak, t_hi, shift = integration_limits(z, nu)

    # one row per sub-interval: [t_lo, t_peak] (only when nu > z) and [t_peak, t_hi]
    left = t_peak > t_lo
    idx = np.concatenate([np.nonzero(left)[0], np.arange(z.size)])
    a = np.concatenate([t_lo[left], t_peak])
    b = np.concatenate([t_peak[left], t_hi])
    zr = z[idx][:, None]
    nr = nu[idx][:, None]
    pr = t_peak[idx][:, None]

    def integrand(t):
        g = g_array(2.0 * zr * np.sinh(t))
        # the two exponents are h - h_min and h - h_min + 4 nu t
        e = shifted_exponent(zr, nr, t, pr)
        return 0.5 * g * (np.exp(-e) + np.exp(-(e + 4.0 * nr * t)))

    vals, errs = tanh_sinh_rows(integrand, a, b, abs_tol=abs_tol, rel_tol=rel_tol,
                                max_levels=max_levels)
    total = np.zeros(z.size)
    err = np.zeros(z.size)
    np.add.at(total, idx, vals)
    np.add.at(err, idx, errs)
    log_m2 = LOG_8_OVER_PI2 + np.log(total) - shift
    return log_m2, err / total
