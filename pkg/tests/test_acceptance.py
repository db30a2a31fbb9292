"""Acceptance criteria 1-12, each at its stated tolerance.

Every test records one line through ``conftest.record``; the terminal summary
prints them as ``criterion N: PASS/FAIL``.
"""

import math
import time
import warnings

import numpy as np
import pytest
from scipy.stats import qmc

from besselphase import derivatives as D
from besselphase import expansions as E
from besselphase import oracle
from besselphase import spectral as S
from besselphase.airy import airy_modulus_sq
from besselphase.coords import EvalPoint
from besselphase.errors import NearIntegerWarning, RegimeError
from besselphase.series import bessel_jy_series

from conftest import record

pytestmark = pytest.mark.slow


def richardson(f, x, h):
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + 2 * h) - f(x - 2 * h)) / (4 * h)
    return (4 * d1 - d2) / 3


def test_c01_oracle_matches_series():
    start = time.perf_counter()
    pts = qmc.Sobol(d=2, scramble=True, seed=20241).random(512)[:500]
    worst, worst_at = 0.0, None
    for u, v in pts:
        z, nu = 60.0 * (1.0 - u), 30.0 * v
        mp = oracle.modulus_phase_oracle(EvalPoint(z, nu))
        j, y = bessel_jy_series(z, nu)
        m = mp.modulus
        # relative to M once M > 1: J and Y are then products M cos, M sin in doubles
        err = (abs(m * math.cos(mp.phase) - j) + abs(m * math.sin(mp.phase) - y)) / max(1.0, m)
        if err > worst:
            worst, worst_at = err, (z, nu)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-7 and elapsed <= 120
    record(1, ok, f"max |Mcos-J|+|Msin-Y| (per max(1,M)) = {worst:.2e} at {worst_at}, "
                  f"{elapsed:.0f} s")
    assert ok


def test_c02_nicholson_inequality():
    nus = np.linspace(0.0, 1000.0, 100)
    gaps = np.geomspace(1e-6, 1e5, 100)
    N, G = np.meshgrid(nus, gaps, indexing="ij")
    z = (N + G).ravel()
    lm, _ = oracle.log_modulus_sq_array(z, N.ravel())
    lhs = 0.5 * math.pi * np.exp(lm) * np.sqrt(G.ravel() * (z + N.ravel()))
    worst = float(lhs.max())
    ok = worst <= 1 + 1e-10
    record(2, ok, f"max (pi/2) M^2 sqrt(z^2-nu^2) = {worst:.15f} on 100x100")
    assert ok


def test_c03_large_argument_law():
    z = np.geomspace(20.0, 2000.0, 30)
    lm, _ = oracle.log_modulus_sq_array(z, np.ones_like(z))
    resid = np.abs(np.expm1(lm + np.log(math.pi * z / 2)))
    slope = float(np.polyfit(np.log(z), np.log(resid), 1)[0])
    ok = slope <= -1.9
    record(3, ok, f"1-term ae residual slope = {slope:.4f}")
    assert ok


def test_c04_debye_corner():
    worst = 0.0
    for z, nu in ((1e5, 10.0), (1e4, 50.0)):
        p = EvalPoint(z, nu)
        diff = abs(E.expand_abe(p).phase_offset - oracle.phase_offset(p))
        worst = max(worst, diff)
    # a 2 pi branch slip would show up as a difference near 6.28
    ok = worst <= 1e-3
    record(4, ok, f"max |theta_abe - theta_oracle| = {worst:.2e}")
    assert ok


def test_c05_transition_modulus():
    lead0 = math.sqrt(airy_modulus_sq(0.0))
    rows = []
    for nu in (1e2, 1e3, 1e4):
        m = math.exp(0.5 * oracle.modulus_sq_nicholson(EvalPoint(nu, nu)).log_value)
        lead = 2 ** (1 / 3) * nu ** (-1 / 3) * lead0
        rows.append((nu, abs(m - lead) * nu))
    worst = max(r[1] for r in rows)
    ok = worst <= 5
    record(5, ok, "nu*|M - lead| = " + ", ".join(f"{r[1]:.3e}@{r[0]:g}" for r in rows))
    assert ok


def test_c06_intermediate_modulus():
    nu = 1e4
    m = math.exp(0.5 * oracle.modulus_sq_nicholson(EvalPoint(nu + math.sqrt(nu), nu)).log_value)
    two_term = 2 ** 0.25 / math.sqrt(math.pi) * nu ** (-3 / 8) * (1 + 0.25 / math.sqrt(nu))
    rel = abs(m - two_term) / m
    ok = rel <= 5e-3
    record(6, ok, f"relative error of the two-term form = {rel:.3e}")
    assert ok


def test_c07_exponential_modulus():
    nu = 1e4
    p = EvalPoint(math.sqrt(nu), nu)
    log_m = 0.5 * oracle.modulus_sq_nicholson(p).log_value
    resid = log_m - 0.5 * E.t_factor(p).log_value - math.log(math.sqrt(2 / math.pi) / math.sqrt(nu))
    ok = abs(resid) <= 2e-2
    record(7, ok, f"|log M - log T/2 - log(sqrt(2/pi)/sqrt(nu))| = {abs(resid):.3e}")
    assert ok


@pytest.fixture(scope="module")
def counts():
    start = time.perf_counter()
    disk_lams = np.arange(1.0, 61.0)
    lat_lams = np.arange(1.0, 201.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearIntegerWarning)
        phase = S.count_disk_many(disk_lams)
        zeros = S.count_disk_many(disk_lams, S.CountMethod.ZEROS)
        phase_all = S.count_disk_many(lat_lams)
        bsum = S.count_lattice_many(lat_lams)
        direct = S.count_lattice_many(lat_lams, S.LatticeMethod.DIRECT)
    return {"phase": phase, "zeros": zeros, "phase_all": phase_all, "bsum": bsum,
            "direct": direct, "elapsed": time.perf_counter() - start}


def test_c08_counting_equivalences(counts):
    disk_eq = np.array_equal(counts["phase"], counts["zeros"])
    lat_eq = np.array_equal(counts["bsum"], counts["direct"])
    ok = disk_eq and lat_eq and counts["elapsed"] <= 300
    record(8, ok, f"PHASE=ZEROS on 1..60: {disk_eq}, BSUM=DIRECT on 1..200: {lat_eq}, "
                  f"{counts['elapsed']:.0f} s")
    assert ok


def test_c09_disk_below_lattice(counts):
    bad = int(np.count_nonzero(counts["phase_all"] > counts["bsum"]))
    bad += int(np.count_nonzero(counts["zeros"] > counts["bsum"][:60]))
    ok = bad == 0
    record(9, ok, f"N_disk > N_D at {bad} of 260 checks")
    assert ok


def test_c10_weyl_remainder():
    lams = np.arange(50.0, 1501.0, 50.0)
    scan = S.weyl_remainder_scan(lams)
    polya_bad = [r.lam for r in scan.reports if r.n_disk > r.lam * r.lam / 4]
    ok = scan.exponent <= 0.70 and not polya_bad
    record(10, ok, f"fitted exponent = {scan.exponent:.3f} over {scan.fitted_points} points, "
                   f"Polya exceptions {polya_bad}")
    assert ok


@pytest.fixture(scope="module")
def gap_data():
    z, nu = S.gap_grid(200)
    gap = S.b_values(z, nu) - S.a_values(z, nu)[0]
    return z, nu, gap


def test_c11_gap_sandwich_literal(gap_data):
    z, nu, gap = gap_data
    bound = S.gap_bound(z, nu)
    low = float(gap.min())
    ratio = float(np.max(gap / bound)) * S.GAP_C
    ok = low >= -1e-9 and bool(np.all(gap <= bound))
    # the stated exponent needs C of order 1e9 here, and more under refinement toward z = nu
    record(11, ok, f"min(B-A) = {low:.2e}, C = {S.GAP_C:g} frozen, needed {ratio:.3e} "
                   f"(vacuous: grows without limit as z -> nu)")
    assert ok


def test_c11b_gap_sandwich_flipped(gap_data):
    z, nu, gap = gap_data
    bound = S.gap_bound(z, nu, flipped=True)
    ratio = float(np.max(gap / bound)) * S.GAP_C_FLIPPED
    ok = float(gap.min()) >= -1e-9 and bool(np.all(gap <= bound))
    record("11b", ok, f"exponent -3/2: C = {S.GAP_C_FLIPPED:g} frozen, needed {ratio:.4f}")
    assert ok


def _fe_checks(nu, a):
    """Largest (gap / allowance) over the FE derivative checks at one point."""
    mu = nu ** (-1 / 3)
    z = nu + a / mu
    parent = E.expand_fe(EvalPoint(z, nu))
    m = math.sqrt(parent.modulus_sq)
    grow = mu * math.sqrt(1 + abs(a))
    h = 0.02 / mu
    worst = 0.0
    for ell in (1, 2, 3):
        fd = richardson(lambda x: D.fe_derivative_expansion(ell - 1, EvalPoint(x, nu))[0], z, h)
        exact = D.fe_derivative_expansion(ell, EvalPoint(z, nu))[0]
        allow = parent.err_estimate * m * grow ** (ell - 1) / h + h * h * m * grow ** (ell + 2)
        worst = max(worst, abs(fd - exact) / allow)
    # order derivative against differences of the parent in nu at fixed z
    hn = 0.02 / mu
    fd = richardson(lambda v: E.expand_fe(EvalPoint(z, v)).j, nu, hn)
    dj, _ = D.dnu_fe(EvalPoint(z, nu))
    full, fewer = D.dnu_fe(EvalPoint(z, nu), 3), D.dnu_fe(EvalPoint(z, nu), 2)
    allow = parent.err_estimate * m / hn + abs(full[0] - fewer[0]) + hn * hn * m * grow ** 3
    return max(worst, abs(fd - dj) / allow)


def _ae_checks(z, nu):
    p = EvalPoint(z, nu)
    r = E.expand_ae(p)
    m = math.sqrt(r.modulus_sq)
    h = 0.05
    lm = lambda x: E.expand_ae(EvalPoint(x, nu)).log_modulus_sq
    fd = richardson(lm, z, h)
    exact = D.log_modulus_sq_dz(p, r)
    worst = abs(fd - exact) / (r.err_estimate / h + h * h / z ** 3)

    def jf(x):
        rx = E.expand_ae(EvalPoint(x, nu))
        return math.exp(0.5 * rx.log_modulus_sq) * math.sin(rx.phase_offset)

    jp, _ = D.jy_prime_from_modphase(p, r)
    fd = richardson(jf, z, h)
    return max(worst, abs(fd - jp) / (r.err_estimate * m / h + h * h * m))


def test_c12_derivative_honesty():
    rng = np.random.default_rng(12)
    worst, where, declined = 0.0, None, 0
    for _ in range(25):
        nu = float(np.exp(rng.uniform(math.log(50.0), math.log(1e5))))
        a = float(rng.uniform(-2.0, 2.0))
        try:
            w = _fe_checks(nu, a)
        except RegimeError:
            declined += 1
            continue
        if w > worst:
            worst, where = w, ("FE", nu, a)
    for _ in range(25):
        nu = float(rng.uniform(0.0, 20.0))
        z = float(np.exp(rng.uniform(math.log(max(25.0, nu * nu)), math.log(1e4))))
        w = _ae_checks(z, nu)
        if w > worst:
            worst, where = w, ("AE", z, nu)
    ok = worst <= 1 and declined == 0
    record(12, ok, f"max |fd - derivative| / allowance = {worst:.3e} at {where}, "
                   f"{50 - declined} points")
    assert ok
