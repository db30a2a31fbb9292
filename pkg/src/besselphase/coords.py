"""Compactified coordinates on the (z, nu) quadrant and regime classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class EvalPoint:
    """A point with argument ``z > 0`` and order ``nu >= 0``."""

    z: float
    nu: float

    def __post_init__(self):
        z, nu = float(self.z), float(self.nu)
        if not (math.isfinite(z) and z > 0):
            raise DomainError(f"z must be finite and positive, got {self.z!r}")
        if not (math.isfinite(nu) and nu >= 0):
            raise DomainError(f"nu must be finite and non-negative, got {self.nu!r}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "nu", nu)


@dataclass(frozen=True)
class CompactCoords:
    """mu = nu^(-1/3), zeta = z^(-1/3), eta = zeta/mu, lam = mu/zeta, w = eta - 1,
    a = (z - nu)/nu^(1/3).

    At ``nu = 0`` the order-side coordinates take their limiting values:
    ``mu = lam = a = +inf``, ``eta = 0`` and ``w = -1``.
    """

    mu: float
    zeta: float
    eta: float
    lam: float
    w: float
    a: float


def to_compact(p: EvalPoint) -> CompactCoords:
    zeta = p.z ** (-1.0 / 3.0)
    if p.nu == 0.0:
        return CompactCoords(mu=math.inf, zeta=zeta, eta=0.0, lam=math.inf, w=-1.0, a=math.inf)
    cbrt_nu = p.nu ** (1.0 / 3.0)
    mu = 1.0 / cbrt_nu
    # eta = (nu/z)^(1/3) directly rather than zeta/mu keeps one rounding
    eta = (p.nu / p.z) ** (1.0 / 3.0)
    return CompactCoords(
        mu=mu,
        zeta=zeta,
        eta=eta,
        lam=1.0 / eta,
        w=eta - 1.0,
        a=(p.z - p.nu) / cbrt_nu,
    )


class Regime(enum.Enum):
    AE = "AE"
    ABE = "ABE"
    FE = "FE"
    OBE = "OBE"
    OE = "OE"
    CORE = "CORE"


@dataclass(frozen=True)
class RegimeConfig:
    """Thresholds separating the asymptotic regimes.

    fe_halfwidth: the transition region is ``|a| <= fe_halfwidth``.
    core_z, core_nu: smallest argument / order at which asymptotics are used.
    abe_margin, obe_margin: smallest ``z/nu - 1`` (resp. ``nu/z - 1``) at
    which the Debye forms are used when ``a`` is inside the Airy band's reach.
    """

    fe_halfwidth: float = 2.0
    core_z: float = 10.0
    core_nu: float = 10.0
    obe_margin: float = 0.1
    abe_margin: float = 0.1

    def __post_init__(self):
        for name in ("fe_halfwidth", "core_z", "core_nu", "obe_margin", "abe_margin"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(f"RegimeConfig.{name} must be positive, got {value!r}")
        if self.fe_halfwidth < 1:
            raise DomainError("RegimeConfig.fe_halfwidth must be >= 1")


DEFAULT_CONFIG = RegimeConfig()


def classify(p: EvalPoint, cfg: RegimeConfig = DEFAULT_CONFIG) -> Regime:
    """Which asymptotic regime governs ``p``.

    The Airy band wins ties.  Outside it, a point on the oscillatory side goes to
    ABE when the ratio margin is met or when it lies beyond the band in ``a``;
    the exponential side is symmetric.  ``OE`` marks the exponential side with a
    small argument; both exponential tags share one evaluator.
    """
    z, nu = p.z, p.nu
    c = to_compact(p)
    if nu >= cfg.core_nu and abs(c.a) <= cfg.fe_halfwidth:
        return Regime.FE
    if z > nu and z >= cfg.core_z:
        if nu == 0.0 or z / nu - 1.0 >= cfg.abe_margin or c.a > cfg.fe_halfwidth:
            return Regime.ABE
    if nu > z and nu >= cfg.core_nu:
        if nu / z - 1.0 >= cfg.obe_margin or c.a < -cfg.fe_halfwidth:
            return Regime.OE if z < cfg.core_z else Regime.OBE
    return Regime.CORE
