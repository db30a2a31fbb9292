"""Ascending-series J_nu and Y_nu, summed in extended decimal precision.

The power series of J_nu suffers cancellation of order e^z, so the terms are
accumulated with :mod:`decimal` at a working precision that grows with z.  Y_nu
comes from the connection formula for non-integer order and from the
logarithmic series for integer order.  Everything here is independent of the
asymptotic expansions and of Nicholson's integral.
"""

from __future__ import annotations

import math
from decimal import Decimal, getcontext, localcontext
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError

SERIES_CEILING = 60.0
MAX_TERMS = 400
# orders closer than this to an integer use the integer-order Y series
_INTEGER_SNAP = 1e-40

_PI = Decimal(
    "3.14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
)
_EULER = Decimal(
    "0.57721566490153286060651209008240243104215933593992"
    "35988057672348848677267776646709369470632917467495"
)


def _working_precision(z: float) -> int:
    # e^z cancellation, plus room for the connection formula near integer order
    return 45 + int(0.4343 * z) + 18


@lru_cache(maxsize=None)
def _bernoulli_even(n: int) -> tuple[Fraction, ...]:
    """B_2, B_4, ..., B_2n as exact fractions (Akiyama-Tanigawa)."""
    a = [Fraction(0)] * (2 * n + 1)
    out = []
    for m in range(2 * n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return tuple(out)


def _dec_lgamma_pos(x: Decimal) -> Decimal:
    """log Gamma(x) for x > 0 by Stirling's series after shifting x >= 40."""
    shift = Decimal(0)
    while x < 40:
        shift += x.ln()
        x += 1
    terms = _bernoulli_even(24)
    s = (x - Decimal("0.5")) * x.ln() - x + (2 * _PI).ln() / 2
    xpow = x
    x2 = x * x
    for k, b in enumerate(terms, start=1):
        s += Decimal(b.numerator) / Decimal(b.denominator) / (2 * k * (2 * k - 1) * xpow)
        xpow *= x2
    return s - shift


def _dec_gamma(x: Decimal) -> Decimal:
    """Gamma(x) for real non-integer-or-positive x."""
    if x > 0:
        return _dec_lgamma_pos(x).exp()
    # raise to positive argument by the recurrence
    prod = Decimal(1)
    while x <= 0:
        prod *= x
        x += 1
    return _dec_lgamma_pos(x).exp() / prod


def _dec_sin_cos(x: Decimal) -> tuple[Decimal, Decimal]:
    """sin and cos of x by Taylor series after reduction to [-pi, pi]."""
    two_pi = 2 * _PI
    x = x - two_pi * (x / two_pi).to_integral_value()
    term = x
    s = Decimal(0)
    k = 1
    eps = Decimal(10) ** (-getcontext().prec - 5)
    while abs(term) > eps:
        s += term
        term = -term * x * x / ((k + 1) * (k + 2))
        k += 2
    term = Decimal(1)
    c = Decimal(0)
    k = 0
    while abs(term) > eps:
        c += term
        term = -term * x * x / ((k + 1) * (k + 2))
        k += 2
    return s, c


def _sum_series(first: Decimal, ratio) -> Decimal:
    """Sum t_0 + t_1 + ... with t_k = t_{k-1} * ratio(k); stops on stagnation."""
    total = first
    term = first
    for k in range(1, MAX_TERMS + 1):
        term = term * ratio(k)
        new = total + term
        if new == total and k > 4:
            return new
        total = new
    return total


def _j_decimal(z: Decimal, nu: Decimal, q: Decimal) -> Decimal:
    """J_nu(z) for nu not a negative integer; q = -z^2/4."""
    half = z / 2
    first = (nu * half.ln()).exp() / _dec_gamma(nu + 1)
    return _sum_series(first, lambda k: q / (k * (k + nu)))


def _y_integer(z: Decimal, n: int, q: Decimal) -> Decimal:
    half = z / 2
    quarter_sq = -q
    jn = _j_decimal(z, Decimal(n), q)
    # finite sum over k < n
    finite = Decimal(0)
    if n > 0:
        term = Decimal(math.factorial(n - 1))
        finite = term
        for k in range(1, n):
            term = term * quarter_sq / (k * (n - k))
            finite += term
        finite = finite / half ** n
    # infinite sum with digamma weights psi(k+1) + psi(n+k+1)
    h_k = Decimal(0)
    h_nk = sum((Decimal(1) / j for j in range(1, n + 1)), Decimal(0))
    term = Decimal(1) / Decimal(math.factorial(n))
    total = (h_k + h_nk - 2 * _EULER) * term
    for k in range(1, MAX_TERMS + 1):
        term = term * q / (k * (n + k))
        h_k += Decimal(1) / k
        h_nk += Decimal(1) / (n + k)
        new = total + (h_k + h_nk - 2 * _EULER) * term
        if new == total and k > 4:
            break
        total = new
    return (-finite + 2 * half.ln() * jn - half ** n * total) / _PI


def jy_decimal(z: float, nu: float, extra_digits: int = 0) -> tuple[Decimal, Decimal]:
    """Return (J_nu(z), Y_nu(z)) as Decimals at the series working precision."""
    with localcontext() as ctx:
        ctx.prec = _working_precision(z) + extra_digits
        zd = Decimal(z)
        q = -(zd * zd) / 4
        n = round(nu)
        dist = abs(nu - n)
        if dist < _INTEGER_SNAP:
            # Y moves by O(dist) from its integer-order value, far below double rounding
            y = _y_integer(zd, n, q)
            return +_j_decimal(zd, Decimal(nu), q), +y
        # the connection formula cancels about log10(1/dist) digits
        ctx.prec += max(0, math.ceil(-math.log10(dist)))
        zd = Decimal(z)
        q = -(zd * zd) / 4
        nud = Decimal(nu)
        j_pos = _j_decimal(zd, nud, q)
        j_neg = _j_decimal(zd, -nud, q)
        s, c = _dec_sin_cos(nud * _PI)
        return +j_pos, +((j_pos * c - j_neg) / s)


def bessel_jy_series(z: float, nu: float, ceiling: float = SERIES_CEILING) -> tuple[float, float]:
    """J_nu(z) and Y_nu(z) from the ascending series, for 0 < z <= ceiling.

    Raises ``DomainError`` outside that range or for negative order.
    """
    if not (z > 0 and math.isfinite(z)):
        raise DomainError(f"series oracle needs z > 0, got {z!r}")
    if z > ceiling:
        raise DomainError(f"z = {z} exceeds the series ceiling {ceiling}")
    if not (nu >= 0 and math.isfinite(nu)):
        raise DomainError(f"order must be finite and >= 0, got {nu!r}")
    j, y = jy_decimal(z, nu)
    return float(j), float(y)
