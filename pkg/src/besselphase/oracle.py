"""Reference evaluation of M^2, theta, J and Y, independent of the expansions.

The modulus comes from Nicholson's integral (see :mod:`besselphase.nicholson`).
The phase comes from

    theta(z) + pi/2 = (2/pi) int_0^z du / (u M^2(u)),

whose piece on ``(0, u0]`` with ``u0 = min(z, 1/2)`` is read off the
ascending series (there J > 0 > Y, so ``theta + pi/2 = arctan(J/(-Y))``);
the remainder is integrated in ``s = log u`` with adaptive Gauss-Legendre.
The offset ``theta + pi/2`` is kept as its own quantity because it can be far
below the rounding unit of ``theta`` on the exponential side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coords import EvalPoint
from .errors import DomainError
from .kernels import g_array
from .nicholson import log_modulus_sq
from .quadrature import gauss_legendre_adaptive
from .series import bessel_jy_series, jy_decimal

# below this argument the phase offset is taken from the series
SERIES_START = 0.5
# longest panel, in log u, handed to the Gauss-Legendre driver
_PANEL = 1.0
_MAX_EXP = 700.0


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_levels: int = 12

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol"):
            v = getattr(self, name)
            if not (0 < v < 1):
                raise DomainError(f"QuadratureSpec.{name} must lie in (0, 1), got {v!r}")
        if not (isinstance(self.max_levels, int) and 4 <= self.max_levels <= 20):
            raise DomainError(f"QuadratureSpec.max_levels must be in [4, 20], got {self.max_levels!r}")


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class LogScaled:
    """A positive quantity stored through its natural log."""

    log_value: float
    sign: int = 1

    @property
    def value(self) -> float:
        """The materialized value; ``inf`` when it does not fit a double."""
        if self.log_value > _MAX_EXP:
            return math.inf
        return self.sign * math.exp(self.log_value)


@dataclass(frozen=True)
class ModulusPhase:
    modulus: float
    phase: float
    log_modulus_sq: LogScaled
    # theta + pi/2, exact to relative accuracy even when far below ulp(theta)
    phase_offset: float = math.nan
    err_modulus_sq: float = 0.0
    err_phase: float = 0.0

    @property
    def j(self) -> float:
        return self.modulus * math.cos(self.phase)

    @property
    def y(self) -> float:
        return self.modulus * math.sin(self.phase)


def _positive(x: float, name: str = "x") -> float:
    x = float(x)
    if not (x > 0) or math.isnan(x):
        raise DomainError(f"{name} must be positive, got {x!r}")
    return x


def g(x: float) -> float:
    """G(x) = e^x K_0(x)."""
    return float(g_array(np.array([_positive(x)]))[0])


def k0(x: float) -> float:
    """K_0(x); underflows to 0 for very large x."""
    x = _positive(x)
    return g(x) * math.exp(-x)


def log_modulus_sq_array(z, nu, q: QuadratureSpec = DEFAULT_QUAD):
    """Vectorized ``(log M^2, relative error)``."""
    return log_modulus_sq(z, nu, abs_tol=q.abs_tol, rel_tol=q.rel_tol, max_levels=q.max_levels)


def modulus_sq_nicholson(p: EvalPoint, q: QuadratureSpec = DEFAULT_QUAD) -> LogScaled:
    log_m2, _ = log_modulus_sq_array(p.z, p.nu, q)
    return LogScaled(float(log_m2[0]))


def _series_offset(u: float, nu: float) -> float:
    """theta + pi/2 at ``u <= 1/2`` from the ascending series."""
    j, y = jy_decimal(u, nu)
    return math.atan(float(j / -y))


def _phase_offsets_sorted(z: np.ndarray, nu: float, q: QuadratureSpec):
    """theta + pi/2 at increasing arguments ``z`` for a single order."""
    u0 = min(float(z[0]), SERIES_START)
    start = _series_offset(u0, nu)
    s_nodes = np.log(z)
    s0 = math.log(u0)
    # breaks at every requested point, with panels no longer than _PANEL
    breaks = [s0]
    for s in s_nodes:
        gap = s - breaks[-1]
        if gap > _PANEL:
            n = int(math.ceil(gap / _PANEL))
            breaks.extend(np.linspace(breaks[-1], s, n + 1)[1:-1])
        breaks.append(s)
    breaks = np.array(breaks)
    owners = np.searchsorted(breaks, s_nodes)

    def integrand(s):
        log_m2, _ = log_modulus_sq_array(np.exp(s), nu, q)
        return (2.0 / math.pi) * np.exp(-log_m2)

    values, errors = gauss_legendre_adaptive(
        integrand, breaks, abs_tol=q.abs_tol, rel_tol=q.rel_tol
    )
    cum = np.concatenate([[0.0], np.cumsum(values)])
    cum_err = np.concatenate([[0.0], np.cumsum(errors)])
    return start + cum[owners], cum_err[owners]


def phase_offset_curve(z, nu: float, q: QuadratureSpec = DEFAULT_QUAD):
    """theta_nu(z) + pi/2 at every entry of ``z`` (any order), plus error estimates."""
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)) or not np.all(np.isfinite(z)):
        raise DomainError("phase curve needs finite positive arguments")
    if not (nu >= 0 and math.isfinite(nu)):
        raise DomainError(f"nu must be finite and non-negative, got {nu!r}")
    flat = z.ravel()
    order = np.argsort(flat, kind="stable")
    vals, errs = _phase_offsets_sorted(flat[order], float(nu), q)
    out = np.empty_like(flat)
    err = np.empty_like(flat)
    out[order] = vals
    err[order] = errs
    return out.reshape(z.shape), err.reshape(z.shape)


def phase_offset(p: EvalPoint, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """theta_nu(z) + pi/2, which is strictly positive."""
    vals, _ = phase_offset_curve(np.array([p.z]), p.nu, q)
    return float(vals[0])


def phase_integral(p: EvalPoint, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """theta_nu(z), unwrapped so that theta -> -pi/2 as z -> 0."""
    return phase_offset(p, q) - math.pi / 2


def modulus_phase_oracle(p: EvalPoint, q: QuadratureSpec = DEFAULT_QUAD) -> ModulusPhase:
    log_m2, rel = log_modulus_sq_array(p.z, p.nu, q)
    offsets, perr = phase_offset_curve(np.array([p.z]), p.nu, q)
    lm = float(log_m2[0])
    modulus = math.exp(0.5 * lm) if 0.5 * lm < _MAX_EXP else math.inf
    off = float(offsets[0])
    return ModulusPhase(
        modulus=modulus,
        phase=off - math.pi / 2,
        log_modulus_sq=LogScaled(lm),
        phase_offset=off,
        err_modulus_sq=float(rel[0]),
        err_phase=float(perr[0]),
    )


__all__ = [
    "QuadratureSpec", "LogScaled", "ModulusPhase", "DEFAULT_QUAD",
    "k0", "g", "modulus_sq_nicholson", "log_modulus_sq_array",
    "phase_integral", "phase_offset", "phase_offset_curve",
    "modulus_phase_oracle", "bessel_jy_series",
]
