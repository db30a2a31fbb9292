"""Disk eigenvalue counting through the Bessel phase, and the lattice comparison.

With A(z, nu) = (theta_nu(z) + pi/2)/pi the Dirichlet eigenvalues of the unit
disk below lambda^2 number

    N_disk(lambda) = sum over n in Z of floor(A(lambda, |n|)),

so n and -n are counted separately.  The comparison function

    B(z, nu) = (sqrt(z^2 - nu^2) - nu arccos(nu/z))/pi + 1/4

counts lattice points in the same way, and B >= A for z > nu.  Orders
n >= lambda contribute nothing because j_{nu,1} > nu.

Floors are certified: an expansion value is used only when it sits further
from an integer than ten times its error estimate; everything else goes to the
phase oracle, one phase curve per order.
"""

from __future__ import annotations

import enum
import math
import threading
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .coords import DEFAULT_CONFIG, RegimeConfig
from .errors import BoundaryWarning, BracketError, DomainError, NearIntegerWarning
from .expansions import FE_SAFETY, _s_minus_atan, abe_arrays, ae_arrays, fe_arrays, obe_arrays
from .nicholson import log_modulus_sq

# constants of the B - A bound, fitted once on the 20 x 20 version of gap_grid
# and frozen (maxima there: 2.41e9 and 0.03979); see gap_bound for the two forms
GAP_C = 2.5e9
GAP_C_FLIPPED = 0.040

TIE_TOL = 1e-9
ZERO_TOL = 1e-12
A_TOL = 1e-12
# floors are trusted when the distance to an integer beats this many error estimates
CERTIFY_FACTOR = 10.0
# estimates above this are not trusted even for flooring
_EST_CAP = 1e-3
_BRACKET_LIMIT = 1e6
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)
_STEP_PANEL = 0.5


class CountMethod(enum.Enum):
    PHASE = "PHASE"
    ZEROS = "ZEROS"


class LatticeMethod(enum.Enum):
    BSUM = "BSUM"
    DIRECT = "DIRECT"


@dataclass(frozen=True)
class ZeroRecord:
    nu: float
    k: int
    value: float


@dataclass(frozen=True)
class CountReport:
    lam: float
    n_disk: int
    n_lattice: int
    weyl2: float
    remainder: float
    method: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam, "n_disk": self.n_disk, "n_lattice": self.n_lattice,
            "weyl2": self.weyl2, "remainder": self.remainder, "method": dict(self.method),
        }


@dataclass(frozen=True)
class RemainderScan:
    reports: list
    exponent: float
    intercept: float
    fitted_points: int


@dataclass(frozen=True)
class PolyaReport:
    checked: int
    lattice_violations: list
    polya_violations: list

    @property
    def ok(self) -> bool:
        return not self.lattice_violations and not self.polya_violations


def _check_positive(lam: float, name: str = "lambda") -> float:
    lam = float(lam)
    if not (lam > 0 and math.isfinite(lam)):
        raise DomainError(f"{name} must be positive and finite, got {lam!r}")
    return lam


# --- B ------------------------------------------------------------------------

def b_values(z, nu) -> np.ndarray:
    """B(z, nu) for z >= nu >= 0, elementwise; 1/4 at z = nu."""
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    z, nu = np.broadcast_arrays(z, nu)
    if np.any(z < nu) or np.any(nu < 0):
        raise DomainError("B(z, nu) needs z >= nu >= 0")
    out = np.full(z.shape, 0.25)
    zero = nu == 0
    out[zero] = z[zero] / math.pi + 0.25
    rest = ~zero & (z > nu)
    if np.any(rest):
        n = nu[rest]
        # s = tan(beta) and arccos(nu/z) = atan(s); s - atan(s) has a series at small s
        s = np.sqrt((z[rest] - n) * (z[rest] + n)) / n
        out[rest] = n * _s_minus_atan(s) / math.pi + 0.25
    return out


def b_fn(z: float, nu: float) -> float:
    return float(b_values(z, nu))


def _b_inverse(k, nu) -> np.ndarray:
    """z with B(z, nu) = k, for k >= 1."""
    k = np.asarray(k, dtype=float)
    nu = np.asarray(nu, dtype=float)
    k, nu = np.broadcast_arrays(k, nu)
    target = math.pi * (k - 0.25)
    out = np.empty(k.shape)
    zero = nu == 0
    out[zero] = target[zero]
    n = nu[~zero]
    t = target[~zero] / n
    # s - atan(s) is convex and increasing: Newton from the upper bound t + pi/2
    s = t + 0.5 * math.pi
    for _ in range(100):
        f = _s_minus_atan(s) - t
        step = f * (1.0 + s * s) / (s * s)
        s = s - step
        if np.all(np.abs(step) <= 1e-15 * s):
            break
    out[~zero] = n * np.sqrt(1.0 + s * s)
    return out


# --- A ------------------------------------------------------------------------

def _expansion_candidates(z: np.ndarray, nu: np.ndarray, cfg: RegimeConfig):
    """Best expansion value of theta + pi/2 and its error, elementwise.

    Each error is the sum of the next two omitted terms, so a single omitted
    term passing through zero cannot fake an exact value.
    """
    best = np.full(z.shape, np.nan)
    err = np.full(z.shape, np.inf)

    def offer(mask, off, e):
        e = np.where(np.isfinite(e) & np.isfinite(off), e, np.inf)
        take = mask & (e < err)
        best[take] = off[take]
        err[take] = e[take]

    with np.errstate(all="ignore"):
        _, off, _, e5 = ae_arrays(z, nu, 5)
        _, _, _, e6 = ae_arrays(z, nu, 6)
        offer(np.ones(z.shape, bool), off, e5 + e6)

        osc = z > nu
        if np.any(osc & (nu > 0)):
            m = osc & (nu > 0)
            zz, nn = z[m], nu[m]
            _, o3, _, e3 = abe_arrays(zz, nn, 3)
            _, _, _, e4 = abe_arrays(zz, nn, 4)
            full_o = np.full(z.shape, np.nan)
            full_e = np.full(z.shape, np.inf)
            full_o[m], full_e[m] = o3, e3 + e4
            offer(m, full_o, full_e)

        band = nu >= cfg.core_nu
        a = (z - nu) * np.where(band, nu, 1.0) ** (-1.0 / 3.0)
        band &= np.abs(a) <= FE_SAFETY * cfg.fe_halfwidth
        if np.any(band):
            _, _, _, o, _, e = fe_arrays(z[band], nu[band], 3)
            full_o = np.full(z.shape, np.nan)
            full_e = np.full(z.shape, np.inf)
            full_o[band], full_e[band] = o, e
            offer(band, full_o, full_e)

        below = (nu > z) & (nu >= cfg.core_nu)
        if np.any(below):
            _, o, em = obe_arrays(z[below], nu[below], 2)
            full_o = np.full(z.shape, np.nan)
            full_e = np.full(z.shape, np.inf)
            # the offset is exponentially small; its relative error is em / 2
            full_o[below], full_e[below] = o, o * em
            offer(below, full_o, full_e)
    err[err > _EST_CAP] = np.inf
    return best, err


def _oracle_fill(z, nu, idx, offsets, errs, q: oracle.QuadratureSpec):
    """Overwrite entries ``idx`` with oracle values, one phase curve per order."""
    if idx.size == 0:
        return
    nus = nu[idx]
    for value in np.unique(nus):
        sel = idx[nus == value]
        vals, e = oracle.phase_offset_curve(z[sel], float(value), q)
        offsets[sel] = vals
        errs[sel] = e


def a_values(z, nu, tol: float = A_TOL, cfg: RegimeConfig = DEFAULT_CONFIG,
             q: oracle.QuadratureSpec = oracle.DEFAULT_QUAD) -> tuple[np.ndarray, np.ndarray]:
    """A(z, nu) and its error estimate, elementwise.

    The most accurate expansion is used where its estimate is below ``tol``;
    the remaining points are evaluated by the oracle.
    """
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    z, nu = np.broadcast_arrays(z, nu)
    shape = z.shape
    z = z.ravel().copy()
    nu = nu.ravel().copy()
    if np.any(~(z > 0)) or np.any(~(nu >= 0)):
        raise DomainError("A(z, nu) needs z > 0 and nu >= 0")
    off, err = _expansion_candidates(z, nu, cfg)
    need = np.nonzero(~(err / math.pi <= tol))[0]
    _oracle_fill(z, nu, need, off, err, q)
    return (off / math.pi).reshape(shape), (err / math.pi).reshape(shape)


def a_fn(z: float, nu: float, tol: float = A_TOL) -> float:
    """A(z, nu) = (theta_nu(z) + pi/2)/pi."""
    a, _ = a_values(z, nu, tol)
    return float(a)


def ab_gap(z: float, nu: float) -> float:
    """B(z, nu) - A(z, nu) for z > nu >= 0."""
    if not z > nu >= 0:
        raise DomainError(f"ab_gap needs z > nu >= 0, got z={z}, nu={nu}")
    return b_fn(z, nu) - a_fn(z, nu)


def gap_bound(z, nu, flipped: bool = False):
    """C z^-1 (1 - (nu/z)^(1/3))^(+-3/2) with the frozen constant.

    The stated exponent +3/2 sends the bound to zero at z = nu, where B - A
    tends to 1/4 - 1/6 = 1/12 as nu grows; ``flipped=True`` uses -3/2, which has
    the right behaviour in the Airy band and at large z.
    """
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    with np.errstate(divide="ignore"):
        # nu = 0 gives log 0 = -inf and base 1
        base = -np.expm1(np.log(nu / z) / 3.0)
    if flipped:
        return GAP_C_FLIPPED / z * base ** -1.5
    return GAP_C / z * base ** 1.5


def gap_grid(n: int, nu_max: float = 500.0, offsets: tuple = (1e-2, 1e3)):
    """(z, nu) with nu on a uniform grid and z - nu geometric, so z > nu everywhere."""
    nu = np.linspace(0.0, nu_max, n)
    off = np.geomspace(offsets[0], offsets[1], n)
    N, O = np.meshgrid(nu, off, indexing="ij")
    return (N + O).ravel(), N.ravel()


def floor_a(lams, nus, cfg: RegimeConfig = DEFAULT_CONFIG,
            q: oracle.QuadratureSpec = oracle.DEFAULT_QUAD) -> tuple[np.ndarray, np.ndarray]:
    """Certified floor(A(lam, nu)) elementwise, and the distance of A to the nearest integer.

    Points with nu >= lam are 0 without evaluation.
    """
    lams = np.asarray(lams, dtype=float)
    nus = np.asarray(nus, dtype=float)
    lams, nus = np.broadcast_arrays(lams, nus)
    z = lams.ravel().copy()
    nu = nus.ravel().copy()
    floors = np.zeros(z.size, dtype=np.int64)
    dist = np.full(z.size, np.inf)
    live = np.nonzero(nu < z)[0]
    if live.size:
        zl, nl = z[live], nu[live]
        off, err = _expansion_candidates(zl, nl, cfg)
        a = off / math.pi
        d = np.abs(a - np.round(a))
        unsure = np.nonzero(~(d > CERTIFY_FACTOR * err / math.pi + ZERO_TOL))[0]
        _oracle_fill(zl, nl, unsure, off, err, q)
        a = off / math.pi
        floors[live] = np.floor(a).astype(np.int64)
        dist[live] = np.abs(a - np.round(a))
    return floors.reshape(lams.shape), dist.reshape(lams.shape)


# --- zeros --------------------------------------------------------------------

def _a_slope(z, nu):
    log_m2, _ = log_modulus_sq(z, nu)
    return 2.0 / (math.pi ** 2 * z) * np.exp(-log_m2)


def _a_increment(z0, z1, nu):
    """A(z1) - A(z0) by composite Gauss-Legendre on A' = 2/(pi^2 z M^2)."""
    width = z1 - z0
    panels = max(1, int(math.ceil(float(np.max(np.abs(width))) / _STEP_PANEL)))
    edges = np.linspace(0.0, 1.0, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    # (point, panel, node) abscissae in units of the step
    frac = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * _GL_NODES[None, :]
    u = z0[:, None, None] + width[:, None, None] * frac[None, :, :]
    vals = _a_slope(u.ravel(), np.repeat(nu, frac.size)).reshape(u.shape)
    w = 0.5 * (hi - lo)[:, None] * _GL_WEIGHTS[None, :]
    return width * (vals * w[None, :, :]).sum(axis=(1, 2))


def _newton_to(k, z, a_at_z, nu):
    """Solve A = k for every row, starting at z with A(z) = a_at_z <= k."""
    lo = z.copy()
    a_lo = a_at_z.copy()
    hi = np.full(z.shape, np.inf)
    a_hi = np.full(z.shape, np.inf)
    cur, a_cur = z.copy(), a_at_z.copy()
    active = np.abs(a_cur - k) > ZERO_TOL
    for _ in range(200):
        if not np.any(active):
            return cur, a_cur
        idx = np.nonzero(active)[0]
        slope = _a_slope(cur[idx], nu[idx])
        trial = cur[idx] + (k[idx] - a_cur[idx]) / slope
        # keep the step inside the bracket; bisect when Newton leaves it
        l, h = lo[idx], hi[idx]
        bad = ~((trial > l) & (trial < h))
        finite_h = np.isfinite(h)
        trial = np.where(bad & finite_h, 0.5 * (l + h), trial)
        trial = np.where(bad & ~finite_h, cur[idx] + math.pi, trial)
        if np.any(trial - nu[idx] > _BRACKET_LIMIT):
            j = idx[np.argmax(trial - nu[idx])]
            raise BracketError(
                f"zero bracket for nu={nu[j]}, k={k[j]} grew past {_BRACKET_LIMIT:g} "
                f"(last z={cur[j]:.17g}, A={a_cur[j]:.17g})")
        a_trial = a_cur[idx] + _a_increment(cur[idx], trial, nu[idx])
        above = a_trial > k[idx]
        hi[idx] = np.where(above, trial, hi[idx])
        a_hi[idx] = np.where(above, a_trial, a_hi[idx])
        lo[idx] = np.where(above, lo[idx], trial)
        a_lo[idx] = np.where(above, a_lo[idx], a_trial)
        cur[idx], a_cur[idx] = trial, a_trial
        done = (np.abs(a_trial - k[idx]) <= ZERO_TOL) | (np.isfinite(hi[idx]) & (hi[idx] - lo[idx] <= 4e-16 * hi[idx]))
        active[idx[done]] = False
    j = int(np.nonzero(active)[0][0])
    raise BracketError(f"zero iteration for nu={nu[j]}, k={k[j]} did not settle "
                       f"(bracket [{lo[j]:.17g}, {hi[j]:.17g}])")


class _ZeroCache:
    """Zeros per order, filled in increasing k.  Entries are never rewritten."""

    def __init__(self):
        self._lock = threading.Lock()
        self._zeros: dict[float, tuple] = {}
        self._last_a: dict[float, float] = {}

    def get(self, nu: float) -> tuple:
        return self._zeros.get(nu, ())

    def snapshot(self, nu: float) -> tuple:
        """The zeros of order nu and A at the last one, read together."""
        with self._lock:
            return self._zeros.get(nu, ()), self._last_a.get(nu, math.nan)

    def append(self, nu: float, have: int, value: float, last_a: float) -> None:
        """Add zero number have + 1, unless another thread already did."""
        with self._lock:
            cur = self._zeros.get(nu, ())
            if len(cur) == have:
                self._zeros[nu] = cur + (value,)
                self._last_a[nu] = last_a


_CACHE = _ZeroCache()


def _extend_zeros(nus: np.ndarray, want_k: int | None = None,
                  z_max: float | None = None) -> None:
    """Grow the cached zero lists until each order has ``want_k`` zeros or passes ``z_max``."""
    nus = np.asarray(nus, dtype=float)
    while True:
        rows, ks, starts, a_starts = [], [], [], []
        for nu in nus:
            have, have_a = _CACHE.snapshot(float(nu))
            k = len(have) + 1
            if want_k is not None and k > want_k:
                continue
            if z_max is not None:
                if have and have[-1] > z_max:
                    continue
                # A <= B, so no zero below z_max when B(z_max) < k
                if z_max <= nu or float(b_values(z_max, nu)) < k:
                    continue
            rows.append(float(nu))
            ks.append(k)
            starts.append(have[-1] if have else math.nan)
            a_starts.append(have_a)
        if not rows:
            return
        nu_arr = np.array(rows)
        k_arr = np.array(ks, dtype=float)
        z0 = np.array(starts)
        a0 = np.array(a_starts)
        fresh = np.isnan(z0)
        if np.any(fresh):
            # B >= A, so the root of B = k lies below the zero
            zb = _b_inverse(k_arr[fresh], nu_arr[fresh])
            ab, _ = a_values(zb, nu_arr[fresh], tol=ZERO_TOL / 10)
            z0[fresh], a0[fresh] = zb, ab
        z, a = _newton_to(k_arr, z0, a0, nu_arr)
        for nu, k, value, av in zip(rows, ks, z, a):
            _CACHE.append(nu, k - 1, float(value), float(av))


def bessel_zero(nu: float, k: int) -> ZeroRecord:
    """k-th positive zero of J_nu, found by solving A(z, nu) = k."""
    nu = float(nu)
    if not (nu >= 0 and math.isfinite(nu)):
        raise DomainError(f"nu must be finite and non-negative, got {nu!r}")
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise DomainError(f"zero index must be a positive integer, got {k!r}")
    _extend_zeros(np.array([nu]), want_k=k)
    return ZeroRecord(nu=nu, k=int(k), value=_CACHE.get(nu)[k - 1])


def zeros_below(nu: float, z_max: float) -> tuple:
    """All zeros j_{nu,k} <= z_max."""
    _extend_zeros(np.array([float(nu)]), z_max=z_max)
    return tuple(v for v in _CACHE.get(float(nu)) if v <= z_max)


# --- counting -------------------------------------------------------------------

def _orders(lam: float) -> np.ndarray:
    return np.arange(0, int(math.ceil(lam)), dtype=float)


def _multiplicity(n: np.ndarray) -> np.ndarray:
    return np.where(n == 0, 1, 2)


def count_disk_many(lams, method: CountMethod = CountMethod.PHASE,
                    cfg: RegimeConfig = DEFAULT_CONFIG) -> np.ndarray:
    """N_disk at every lambda in ``lams``."""
    lams = np.array([_check_positive(x) for x in np.atleast_1d(lams)], dtype=float)
    if lams.size == 0:
        return np.zeros(0, dtype=np.int64)
    top = float(lams.max())
    n = _orders(top)
    if method is CountMethod.ZEROS:
        _extend_zeros(n, z_max=top)
        out = np.zeros(lams.size, dtype=np.int64)
        for order in n:
            zs = np.array(_CACHE.get(float(order)))
            if zs.size == 0:
                continue
            hits = np.searchsorted(zs, lams, side="right")
            out += hits * (1 if order == 0 else 2)
        return out
    grid_l, grid_n = np.meshgrid(lams, n, indexing="ij")
    floors, dist = floor_a(grid_l, grid_n, cfg)
    if np.any(dist < TIE_TOL):
        i, j = np.argwhere(dist < TIE_TOL)[0]
        warnings.warn(f"A({lams[i]}, {n[j]}) is within {TIE_TOL:g} of an integer; "
                      f"lambda is at an eigenvalue and the floor is reported",
                      NearIntegerWarning, stacklevel=2)
    return (floors * _multiplicity(n)[None, :]).sum(axis=1)


def count_disk(lam: float, method: CountMethod = CountMethod.PHASE,
               cfg: RegimeConfig = DEFAULT_CONFIG) -> int:
    """Dirichlet eigenvalues of the unit disk at most lam^2, with multiplicity."""
    lam = _check_positive(lam)
    top = math.ceil(lam)
    # orders from ceil(lam) on are skipped; j_{nu,1} > nu makes their floors 0
    check, _ = a_values(lam, float(top), tol=_EST_CAP, cfg=cfg)
    if not float(check) < 1.0:
        raise ArithmeticError(f"A({lam}, {top}) >= 1 contradicts j_nu1 > nu")
    return int(count_disk_many([lam], method, cfg)[0])


def _lattice_bsum(lams: np.ndarray) -> np.ndarray:
    out = np.zeros(lams.size, dtype=np.int64)
    for i, lam in enumerate(lams):
        n = _orders(lam)
        n = n[n < lam]
        b = b_values(lam, n)
        fl = np.floor(np.maximum(b, 0.0)).astype(np.int64)
        if np.any(np.abs(b - np.round(b)) < TIE_TOL):
            warnings.warn(f"B({lam}, n) is within {TIE_TOL:g} of an integer", NearIntegerWarning,
                          stacklevel=3)
        out[i] = int((fl * _multiplicity(n)).sum())
    return out


def _upper_curve(x: np.ndarray) -> np.ndarray:
    """Upper boundary of D: (sqrt(1 - x^2) - x arccos x)/pi on [-1, 1]."""
    return (np.sqrt(1.0 - x * x) - x * np.arccos(x)) / math.pi


def _lattice_direct(lams: np.ndarray) -> np.ndarray:
    out = np.zeros(lams.size, dtype=np.int64)
    for i, lam in enumerate(lams):
        top = int(math.ceil(lam)) + 2
        n = np.arange(-top, top + 1, dtype=float)[:, None]
        k = np.arange(0, top + 2, dtype=float)[None, :]
        x = n / lam
        inside_x = np.abs(x) <= 1.0
        xc = np.clip(x, -1.0, 1.0)
        upper = lam * _upper_curve(xc)
        lower = np.maximum(0.0, -n)
        yy = k - 0.25
        inside = inside_x & (yy >= lower) & (yy <= upper)
        near = inside_x & ((np.abs(yy - upper) < TIE_TOL) | (np.abs(yy - lower) < TIE_TOL))
        if np.any(near):
            warnings.warn(f"a lattice point lies within {TIE_TOL:g} of the boundary of "
                          f"{lam} D", BoundaryWarning, stacklevel=3)
        out[i] = int(inside.sum())
    return out


def count_lattice_many(lams, method: LatticeMethod = LatticeMethod.BSUM) -> np.ndarray:
    lams = np.array([_check_positive(x) for x in np.atleast_1d(lams)], dtype=float)
    if method is LatticeMethod.DIRECT:
        return _lattice_direct(lams)
    return _lattice_bsum(lams)


def count_lattice(lam: float, method: LatticeMethod = LatticeMethod.BSUM) -> int:
    """N_D(lam): integer pairs (n, k) with (n, k - 1/4) in lam D."""
    return int(count_lattice_many([lam], method)[0])


def weyl2(lam):
    return 0.25 * lam * lam - 0.5 * lam


def count_report(lam: float, disk: CountMethod = CountMethod.PHASE,
                 lattice: LatticeMethod = LatticeMethod.BSUM) -> CountReport:
    return weyl_remainder_scan([lam], disk, lattice).reports[0]


def weyl_remainder_scan(lambdas, disk: CountMethod = CountMethod.PHASE,
                        lattice: LatticeMethod = LatticeMethod.BSUM) -> RemainderScan:
    """Count reports for every lambda, with a least-squares fit of log|R| against log lambda.

    Points with R = 0 have no logarithm and are left out of the fit.
    """
    lams = np.array([_check_positive(x) for x in lambdas], dtype=float)
    nd = count_disk_many(lams, disk)
    nl = count_lattice_many(lams, lattice)
    reports = []
    for lam, a, b in zip(lams, nd, nl):
        w = weyl2(float(lam))
        reports.append(CountReport(lam=float(lam), n_disk=int(a), n_lattice=int(b), weyl2=w,
                                   remainder=float(a) - w,
                                   method={"n_disk": disk.value, "n_lattice": lattice.value}))
    rem = np.array([abs(r.remainder) for r in reports])
    use = rem > 0
    if use.sum() >= 2:
        slope, icpt = np.polyfit(np.log(lams[use]), np.log(rem[use]), 1)
    else:
        slope, icpt = math.nan, math.nan
    return RemainderScan(reports=reports, exponent=float(slope), intercept=float(icpt),
                         fitted_points=int(use.sum()))


def polya_check(lambda_max: float, step: float) -> PolyaReport:
    """Compare N_disk with N_D and with lambda^2/4 on a grid and just past each eigenvalue.

    Violations are returned as report entries (dicts with the full context).
    """
    lambda_max = _check_positive(lambda_max, "lambda_max")
    if not 0 < step <= 1:
        raise DomainError(f"step must be in (0, 1], got {step!r}")
    grid = np.arange(1.0, lambda_max + 0.5 * step, step)
    grid = grid[grid <= lambda_max]
    n = _orders(lambda_max)
    _extend_zeros(n, z_max=lambda_max)
    eig = []
    for order in n:
        eig.extend(v for v in _CACHE.get(float(order)) if v <= lambda_max)
    eig = np.array(sorted(eig))
    # N_disk jumps at each eigenvalue; check just after it, where it is largest
    after = eig * (1.0 + 1e-9)
    points = np.unique(np.concatenate([grid, after[after <= lambda_max]]))
    nd = count_disk_many(points, CountMethod.ZEROS)
    nl = count_lattice_many(points, LatticeMethod.BSUM)
    over_lattice, polya = [], []
    for lam, a, b in zip(points, nd, nl):
        if a > b:
            over_lattice.append({"lambda": float(lam), "n_disk": int(a), "n_lattice": int(b)})
        if a > 0.25 * lam * lam:
            polya.append({"lambda": float(lam), "n_disk": int(a), "bound": 0.25 * lam * lam})
    return PolyaReport(checked=int(points.size), lattice_violations=over_lattice,
                       polya_violations=polya)


__all__ = [
    "CountMethod", "LatticeMethod", "ZeroRecord", "CountReport", "RemainderScan", "PolyaReport",
    "a_fn", "a_values", "b_fn", "b_values", "ab_gap", "gap_bound", "gap_grid", "floor_a",
    "bessel_zero", "zeros_below", "count_disk", "count_disk_many", "count_lattice",
    "count_lattice_many", "count_report", "weyl_remainder_scan", "polya_check",
    "GAP_C", "GAP_C_FLIPPED",
]
