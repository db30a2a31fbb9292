"""Vectorized quadrature rules used by the reference evaluators.

Two rules live here:

* ``tanh_sinh_rows`` -- double-exponential (tanh-sinh) quadrature with nested
  level refinement, applied to many integrals at once (one per row).  Endpoint
  singularities of logarithmic or algebraic type are absorbed by the rule.
* ``gauss_legendre_adaptive`` -- panel-wise adaptive Gauss-Legendre for smooth
  integrands, also batched so that every integrand call sees all panels.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import QuadratureError

_HALF_PI = 0.5 * math.pi
# tanh-sinh abscissae beyond this are within ~1e-25 of the endpoints.
_TAU_MAX = 3.6


def _ts_nodes(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Return the non-negative tanh-sinh parameters new at ``level``.

    Level 0 uses step 1 and includes tau = 0; level k > 0 contributes the odd
    multiples of 2**-k.
    """
    if level == 0:
        tau = np.arange(0.0, _TAU_MAX + 1e-12, 1.0)
    else:
        step = 2.0 ** -level
        n = int(_TAU_MAX / step)
        tau = np.arange(1, n + 1, 2) * step
    y = _HALF_PI * np.sinh(tau)
    # c is the distance to the nearer endpoint in units of (b - a)
    c = 1.0 / (1.0 + np.exp(2.0 * y))
    w = 2.0 * c * (1.0 - c) * _HALF_PI * np.cosh(tau)
    return c, w


def tanh_sinh_rows(
    f: Callable[[np.ndarray], np.ndarray],
    a: np.ndarray,
    b: np.ndarray,
    abs_tol: float = 1e-13,
    rel_tol: float = 1e-12,
    max_levels: int = 12,
    min_level: int = 3,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate ``f`` over ``[a[i], b[i]]`` for every row ``i``.

    ``f`` is called with an ``(n, m)`` array of abscissae (row ``i`` lies in
    ``[a[i], b[i]]``) and must return values of the same shape.

    Returns ``(values, error_estimates)``.  Raises ``QuadratureError`` when some
    row has not met ``max(abs_tol, rel_tol*|value|)`` after ``max_levels``.

    Nodes stop about e^-57 from the endpoints, so integrable singularities as
    strong as t^(-1/2) lose an unreported tail near 1e-12; logarithmic ones are safe.
    """
    a = np.asarray(a, dtype=float).reshape(-1, 1)
    b = np.asarray(b, dtype=float).reshape(-1, 1)
    width = b - a

    def level_sum(level: int) -> np.ndarray:
        c, w = _ts_nodes(level)
        if level == 0:
            # tau = 0 is the midpoint and is counted once
            mid = f(a + 0.5 * width)[:, 0] * w[0]
            c, w = c[1:], w[1:]
        else:
            mid = 0.0
        left = f(a + width * c[None, :])
        right = f(b - width * c[None, :])
        return mid + ((left + right) * w[None, :]).sum(axis=1)

    raw = level_sum(0)
    total = raw * width[:, 0]
    err = np.full(total.shape, np.inf)
    step = 1.0
    for level in range(1, max_levels + 1):
        step *= 0.5
        raw = 0.5 * raw + step * level_sum(level)
        new_total = raw * width[:, 0]
        err = np.abs(new_total - total)
        total = new_total
        if level >= min_level and np.all(err <= np.maximum(abs_tol, rel_tol * np.abs(total))):
            return total, err
    worst = float(np.max(err / np.maximum(abs_tol, rel_tol * np.abs(total))))
    raise QuadratureError(
        f"tanh-sinh did not converge in {max_levels} levels (worst error/tolerance {worst:.3g})",
        estimate=float(np.max(err)),
    )


# stagnating panels are accepted only within this factor of rel_tol
_NOISE_FACTOR = 1e3

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def gauss_legendre_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    breaks: np.ndarray,
    abs_tol: float = 1e-13,
    rel_tol: float = 1e-12,
    order: int = 10,
    max_rounds: int = 30,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate a smooth ``f`` over each interval ``[breaks[i], breaks[i+1]]``.

    Every panel is compared against its two halves; panels that disagree by
    more than their share of the tolerance are split.  ``f`` receives a flat
    array of abscissae.  Returns per-interval ``(values, error_estimates)``;
    the tolerance applies to the sum over all intervals.
    """
    x, w = _gl(order)
    breaks = np.asarray(breaks, dtype=float)
    n_int = breaks.size - 1
    values = np.zeros(n_int)
    errors = np.zeros(n_int)
    if n_int <= 0:
        return values, errors

    lo = breaks[:-1].copy()
    hi = breaks[1:].copy()
    owner = np.arange(n_int)
    span = abs(breaks[-1] - breaks[0])
    coarse = None
    parent_rel = np.full(n_int, np.inf)
    for _ in range(max_rounds):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        quarter = 0.5 * half
        # nodes of the two halves; the whole-panel rule is reused from the parent
        pts = np.concatenate([
            (lo + quarter)[:, None] + quarter[:, None] * x[None, :],
            (mid + quarter)[:, None] + quarter[:, None] * x[None, :],
        ], axis=1)
        vals = f(pts.ravel()).reshape(pts.shape)
        k = x.size
        left = quarter * (vals[:, :k] @ w)
        right = quarter * (vals[:, k:] @ w)
        fine = left + right
        if coarse is None:
            whole = f(((mid)[:, None] + half[:, None] * x[None, :]).ravel())
            coarse = half * (whole.reshape(-1, k) @ w)
        diff = np.abs(fine - coarse)
        # absolute budget is shared by width; the relative test is per panel,
        # which bounds the total by rel_tol * sum |panel| and stays above the
        # noise floor of integrands that are themselves computed by quadrature
        share = abs_tol * np.abs(hi - lo) / span if span > 0 else np.full(lo.shape, abs_tol)
        rel = diff / np.maximum(np.abs(fine), np.finfo(float).tiny)
        done = diff <= np.maximum(share, rel_tol * np.abs(fine))
        # a smooth integrand gains ~2^(2 order) per halving; a panel that is
        # already close and gains nothing has hit the integrand's own noise
        done |= (rel < _NOISE_FACTOR * rel_tol) & (rel > 0.25 * parent_rel)
        last_diff = float(diff.max())
        np.add.at(values, owner[done], fine[done])
        np.add.at(errors, owner[done], diff[done])
        if np.all(done):
            return values, errors
        keep = ~done
        lo_k, mid_k, hi_k = lo[keep], mid[keep], hi[keep]
        lo = np.concatenate([lo_k, mid_k])
        hi = np.concatenate([mid_k, hi_k])
        owner = np.concatenate([owner[keep], owner[keep]])
        coarse = np.concatenate([left[keep], right[keep]])
        parent_rel = np.concatenate([rel[keep], rel[keep]])
    raise QuadratureError(
        f"adaptive Gauss-Legendre exceeded {max_rounds} subdivision rounds",
        estimate=last_diff,
    )
