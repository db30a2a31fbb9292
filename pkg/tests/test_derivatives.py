"""Derivatives from the modulus-phase product rule and the differentiated Airy sums."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from besselphase import derivatives as D
from besselphase import expansions as E
from besselphase import oracle
from besselphase.airy import airy_eval
from besselphase.coords import EvalPoint, Regime
from besselphase.errors import DomainError, RegimeError

# 40-digit references
J1P_100 = 0.020757303824364244005
J15P_5 = -0.2912725929547395813
Y15P_5 = -0.19779504207345043852
J40P_40 = 0.034473396066317239571
Y40P_40 = 0.061975063215512335151
DNU_J_40 = -0.035562797654730490256
DNU_Y_40 = -0.06008635374445682553


def richardson(f, x, h):
    """Fourth-order central difference from steps h and 2h."""
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + 2 * h) - f(x - 2 * h)) / (4 * h)
    return (4 * d1 - d2) / 3


def oracle_j(z, nu):
    return oracle.modulus_phase_oracle(EvalPoint(z, nu)).j


@pytest.mark.parametrize("ell, wrt", [(-1, D.Axis.ARG), (4, D.Axis.ARG), (2, D.Axis.ORDER),
                                      (1.0, D.Axis.ARG)])
def test_request_validation(ell, wrt):
    with pytest.raises(DomainError):
        D.DerivativeRequest(ell, wrt)


def test_request_accepts_supported_orders():
    assert D.DerivativeRequest(3).wrt is D.Axis.ARG
    assert D.DerivativeRequest(1, D.Axis.ORDER).ell == 1


def test_wronskian_from_oracle():
    p = EvalPoint(5.0, 1.5)
    mp = oracle.modulus_phase_oracle(p)
    jp, yp = D.jy_prime_from_modphase(p, mp)
    assert mp.j * yp - jp * mp.y == pytest.approx(2 / (5 * math.pi), abs=1e-8)
    assert jp == pytest.approx(J15P_5, abs=1e-10) and yp == pytest.approx(Y15P_5, abs=1e-10)


def test_large_argument_derivative_against_differences():
    p = EvalPoint(100.0, 1.0)
    jp, _ = D.jy_prime_from_modphase(p, oracle.modulus_phase_oracle(p))
    assert abs(jp - richardson(lambda z: oracle_j(z, 1.0), 100.0, 1e-3)) < 1e-5
    jp_ae, _ = D.jy_prime_from_modphase(p, E.evaluate_auto(EvalPoint(100.0, 1.0)))
    assert jp_ae == pytest.approx(J1P_100, abs=1e-12)


def test_half_integer_order_closed_form():
    z = 50.3
    r = E.expand_ae(EvalPoint(z, 0.5))
    jp, yp = D.jy_prime_from_modphase(EvalPoint(z, 0.5), r)
    amp = math.sqrt(2 / (math.pi * z))
    assert jp == pytest.approx(amp * (math.cos(z) - math.sin(z) / (2 * z)), abs=1e-15)
    # leading order: J' ~ -M sin(theta) with theta = z - pi/2
    assert jp == pytest.approx(-amp * math.sin(z - math.pi / 2), abs=amp / z)


def test_overflowing_modulus_is_refused():
    p = EvalPoint(1.0, 500.0)
    with pytest.raises(RegimeError):
        D.jy_prime_from_modphase(p, oracle.modulus_phase_oracle(p))


def test_fe_order_zero_is_the_expansion():
    p = EvalPoint(1e4, 1e4)
    r = E.expand_fe(p)
    assert D.fe_derivative_expansion(0, p) == (r.j, r.y)


def test_fe_first_derivative_against_differences():
    nu = 1e4
    err = E.expand_fe(EvalPoint(nu, nu)).err_estimate
    jp, yp = D.fe_derivative_expansion(1, EvalPoint(nu, nu))
    fd_j = richardson(lambda z: E.expand_fe(EvalPoint(z, nu)).j, nu, 0.5)
    fd_y = richardson(lambda z: E.expand_fe(EvalPoint(z, nu)).y, nu, 0.5)
    m = math.sqrt(E.expand_fe(EvalPoint(nu, nu)).modulus_sq)
    assert abs(jp - fd_j) <= err * m / 0.5 and abs(yp - fd_y) <= err * m / 0.5


def test_fe_first_derivative_against_reference():
    p = EvalPoint(40.0, 40.0)
    jp, yp = D.fe_derivative_expansion(1, p)
    # the derivative of the next omitted orders scales like nu^(-1/3) times their size
    tol = E.expand_fe(p).err_estimate * 40 ** (-1 / 3)
    assert abs(jp - J40P_40) <= tol and abs(yp - Y40P_40) <= tol
    lead = -2 ** (2 / 3) * airy_eval(0.0).aip * 40 ** (-2 / 3)
    assert jp == pytest.approx(lead, rel=3e-2)
    assert lead > 0


def test_fe_derivative_outside_band():
    with pytest.raises(RegimeError):
        D.fe_derivative_expansion(1, EvalPoint(8.0, 27.0))
    with pytest.raises(DomainError):
        D.fe_derivative_expansion(4, EvalPoint(1e4, 1e4))


def test_lift_coefficients():
    assert D.d_dnu_lift(0.0, 0.1) == pytest.approx((-0.1, -1 / 3000), rel=1e-14)
    assert D.d_dnu_lift(3.0, 0.1) == pytest.approx((-0.101, -1 / 3000), rel=1e-14)
    small = D.d_dnu_lift(1.0, 1e-6)
    assert abs(small[0]) < 2e-6 and abs(small[1]) < 1e-18
    with pytest.raises(DomainError):
        D.d_dnu_lift(0.0, 0.0)


def test_lift_is_dominated_by_the_a_term_on_the_diagonal():
    mu = 1e4 ** (-1 / 3)
    coef_a, coef_bmu = D.d_dnu_lift(0.0, mu)
    assert coef_a == -mu and abs(coef_bmu) < mu ** 2 * abs(coef_a)


def _dnu_tolerance(p):
    # the last order kept bounds the omitted ones in the asymptotic range
    full, fewer = D.dnu_fe(p, 3), D.dnu_fe(p, 2)
    return max(abs(full[0] - fewer[0]), abs(full[1] - fewer[1]))


def test_order_derivative_on_diagonal():
    nu = 1e4
    dj, _ = D.dnu_fe(EvalPoint(nu, nu))
    fd = richardson(lambda v: oracle_j(nu, v), nu, 0.5)
    assert dj == pytest.approx(fd, rel=1e-4)


def test_order_derivative_off_diagonal():
    nu = 1e4
    z = nu + nu ** (1 / 3)
    dj, _ = D.dnu_fe(EvalPoint(z, nu))
    fd = richardson(lambda v: oracle_j(z, v), nu, 0.5)
    assert abs(dj - fd) <= _dnu_tolerance(EvalPoint(z, nu))


def test_order_derivative_reference():
    p = EvalPoint(40.0, 40.0)
    dj, dy = D.dnu_fe(p)
    tol = _dnu_tolerance(p)
    assert abs(dj - DNU_J_40) <= tol and abs(dy - DNU_Y_40) <= tol


# --- properties -----------------------------------------------------------------

band = st.tuples(st.floats(min_value=20.0, max_value=1e5), st.floats(min_value=-4.0, max_value=4.0))


def _fd_gap(ell, nu, z, h):
    fd = richardson(lambda x: D.fe_derivative_expansion(ell - 1, EvalPoint(x, nu))[0], z, h)
    return abs(fd - D.fe_derivative_expansion(ell, EvalPoint(z, nu))[0])


@settings(max_examples=40, deadline=None)
@given(point=band, ell=st.integers(min_value=1, max_value=3))
def test_differentiated_sums_match_differences(point, ell):
    nu, a = point
    mu = nu ** (-1 / 3)
    z = nu + a / mu
    try:
        parent = E.expand_fe(EvalPoint(z, nu))
    except RegimeError:
        return
    h = 0.02 / mu
    m = math.sqrt(parent.modulus_sq)
    # each z-derivative costs a factor mu, and about sqrt(1 + |a|) from the Airy oscillation
    grow = mu * math.sqrt(1 + abs(a))
    parent_err = parent.err_estimate * m * grow ** (ell - 1)
    scale = m * grow ** (ell + 2)
    try:
        gap = _fd_gap(ell, nu, z, h)
    except RegimeError:
        # the stencil reaches past the declining edge
        return
    assert gap <= parent_err / h + h * h * scale
    # sharper: the gap is pure O(h^4) difference error, down to rounding
    floor = 1e-13 * m * grow ** (ell - 1) / (h / 2)
    assert _fd_gap(ell, nu, z, h / 2) <= max(gap / 8, 10 * floor)


@settings(max_examples=40, deadline=None)
@given(point=band)
def test_wronskian_in_band(point):
    nu, a = point
    z = nu + a * nu ** (1 / 3)
    p = EvalPoint(z, nu)
    try:
        r = E.expand_fe(p)
    except RegimeError:
        return
    jp, yp = D.fe_derivative_expansion(1, p)
    m = math.sqrt(r.modulus_sq)
    # absolute errors of J, Y and of J', Y' carried through J Y' - J' Y
    e_val = r.err_estimate * m / 2
    e_der = D.fe_derivative_error(1, p)
    bound = 2 * (e_val * math.hypot(jp, yp) + m * e_der) + 2 * e_val * e_der
    w = (r.j * yp - jp * r.y) * math.pi * z / 2
    assert abs(w - 1) <= math.pi * z / 2 * bound + 1e-12


@pytest.mark.parametrize("nu, a", [(20.0, -0.425), (20.0, -0.4), (20.0, 1.5), (200.0, -1.0),
                                   (2000.0, 0.3)])
def test_derivative_error_estimate_is_honest(nu, a):
    # the parent's estimate undershoots the derivative error near nu = 20, a = -0.4
    p = EvalPoint(nu + a * nu ** (1 / 3), nu)
    ref = oracle.modulus_phase_oracle(p)
    jp_ref, yp_ref = D.jy_prime_from_modphase(p, ref)
    jp, yp = D.fe_derivative_expansion(1, p)
    err = math.hypot(jp - jp_ref, yp - yp_ref)
    assert err <= D.fe_derivative_error(1, p)


log_uniform = st.floats(min_value=math.log(10.0), max_value=math.log(1e5)).map(math.exp)


@settings(max_examples=60, deadline=None)
@given(z=log_uniform, nu=log_uniform)
def test_wronskian_everywhere_asymptotic(z, nu):
    p = EvalPoint(z, nu)
    r = E.evaluate_auto(p)
    if r.regime is Regime.CORE or r.log_modulus_sq > 1400:
        return
    jp, yp = D.jy_prime_from_modphase(p, r)
    m = math.exp(0.5 * r.log_modulus_sq)
    j, y = m * math.sin(r.phase_offset), -m * math.cos(r.phase_offset)
    if abs(j) < 1e-280:
        # deep on the exponential side J underflows and the product carries no digits
        return
    # the Wronskian is carried exactly by theta' = 2/(pi z M^2)
    assert (j * yp - jp * y) * math.pi * z / 2 == pytest.approx(1.0, rel=1e-6)
