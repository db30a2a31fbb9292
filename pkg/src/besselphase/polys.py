"""Exact coefficient generators for the Debye and Airy-type expansions.

Polynomials are tuples of :class:`fractions.Fraction`, lowest degree first.

Debye polynomials u_k(t) follow from
    u_{k+1} = t^2 (1 - t^2) u_k' / 2 + (1/8) int_0^t (1 - 5 s^2) u_k(s) ds.

Transition polynomials P_k(a), Q_k(a) are derived rather than transcribed.
Put z = nu + a nu^(1/3), eps = nu^(-2/3), x = -2^(1/3) a and

    J = 2^(1/3) nu^(-1/3) [ p Ai(x) + 2^(1/3) q Ai'(x) ],
    p = sum P_k eps^k,   q = eps sum Q_k eps^k.

Bessel's equation, after eliminating Ai'' = x Ai, splits into one equation per
Airy function.  At order eps^k those give P_k' and a third-order equation
    Q''' + 8 a Q' + 4 Q = R(a)
for Q_{k-1}, which has a unique polynomial solution.  The constant P_k(0) is
fixed by the Wronskian, which in these variables reads

    p^2 + p' q - p q' + 2 a q^2 = 1 / (1 + a eps).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

Poly = tuple  # of Fraction

ZERO: Poly = ()
ONE: Poly = (Fraction(1),)
A: Poly = (Fraction(0), Fraction(1))


def _trim(c) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def add(*ps: Poly) -> Poly:
    n = max((len(p) for p in ps), default=0)
    return _trim(sum((p[i] for p in ps if i < len(p)), Fraction(0)) for i in range(n))


def scale(p: Poly, s) -> Poly:
    return _trim(Fraction(s) * c for c in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return _trim(out)


def deriv(p: Poly) -> Poly:
    return _trim(i * p[i] for i in range(1, len(p)))


def integ(p: Poly) -> Poly:
    return _trim([Fraction(0)] + [c / (i + 1) for i, c in enumerate(p)])


def evaluate(p: Poly, x):
    acc = 0.0 if not isinstance(x, Fraction) else Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


# --- Debye -----------------------------------------------------------------

@lru_cache(maxsize=None)
def debye_poly(k: int) -> Poly:
    """u_k(t) of the large-order Debye expansions."""
    if k == 0:
        return ONE
    u = debye_poly(k - 1)
    t2 = mul(A, A)
    first = scale(mul(mul(t2, add(ONE, scale(t2, -1))), deriv(u)), Fraction(1, 2))
    second = scale(integ(mul(add(ONE, scale(t2, -5)), u)), Fraction(1, 8))
    return add(first, second)


@lru_cache(maxsize=None)
def debye_real_coeffs(k: int) -> Poly:
    """Coefficients r_m with  sum r_m c^m  equal to u_k(i c) (k even) or -i u_k(i c) (k odd).

    These are the real multipliers of cos/sin in the oscillatory Debye forms,
    with ``c = cot(beta)``.
    """
    u = debye_poly(k)
    out = []
    for m, coeff in enumerate(u):
        if coeff == 0:
            out.append(Fraction(0))
            continue
        # i^m for even k, -i^(m+1) for odd k; m has the parity of k
        power = m if k % 2 == 0 else m + 1
        sign = -1 if (power // 2) % 2 else 1
        if k % 2:
            sign = -sign
        out.append(sign * coeff)
    return _trim(out)


# --- transition (Airy) polynomials -------------------------------------------

def _solve_q(rhs: Poly) -> Poly:
    """Polynomial Q with Q''' + 8 a Q' + 4 Q = rhs."""
    n = len(rhs)
    q = [Fraction(0)] * n
    # leading coefficients first: a^m maps to (8m+4) a^m + m(m-1)(m-2) a^(m-3)
    for m in range(n - 1, -1, -1):
        resid = rhs[m]
        if m + 3 < n:
            resid -= (m + 3) * (m + 2) * (m + 1) * q[m + 3]
        q[m] = resid / (8 * m + 4)
    return _trim(q)


def _coeff(series, k):
    return series[k] if 0 <= k < len(series) else ZERO


@lru_cache(maxsize=None)
def transition_polys(kmax: int) -> tuple[tuple[Poly, ...], tuple[Poly, ...]]:
    """(P_0..P_kmax, Q_0..Q_{kmax-1})."""
    P = [ONE]
    Q = []
    a2 = mul(A, A)
    for k in range(1, kmax + 1):
        # p~ and q~ as eps-series: p~_j = P_j, q~_j = Q_{j-1}
        def pt(j):
            return _coeff(P, j)

        def qt(j):
            return _coeff(Q, j - 1) if j >= 1 else ZERO

        # first equation (coefficient of Ai'), order k:
        #   Q_{k-1}'' - 2 P_k' + K1 = 0
        def x1(j):
            return add(deriv(deriv(qt(j))), scale(deriv(pt(j)), -2), scale(mul(A, qt(j)), -2))

        def y1(j):
            return add(deriv(qt(j)), scale(pt(j), -1))

        k1 = add(
            scale(mul(A, x1(k - 1)), 2), mul(a2, x1(k - 2)),
            y1(k - 1), mul(A, y1(k - 2)), mul(a2, qt(k - 1)),
        )

        # second equation (coefficient of Ai), order k:
        #   P_k'' + 2 Q_{k-1} + 4 a Q_{k-1}' + K2 = 0
        def x2(j):
            return add(deriv(deriv(pt(j))), scale(qt(j), 2),
                       scale(mul(A, deriv(qt(j))), 4), scale(mul(A, pt(j)), -2))

        def y2(j):
            return add(deriv(pt(j)), scale(mul(A, qt(j)), 2))

        k2 = add(
            scale(mul(A, x2(k - 1)), 2), mul(a2, x2(k - 2)),
            mul(a2, pt(k - 1)), y2(k - 1), mul(A, y2(k - 2)),
        )
        # eliminate P_k' = (Q'' + K1)/2 from the second equation
        q_new = _solve_q(scale(add(deriv(k1), scale(k2, 2)), -1))
        Q.append(q_new)
        dp = scale(add(deriv(deriv(q_new)), k1), Fraction(1, 2))
        p_new = integ(dp)
        P.append(p_new)
        # Wronskian at order k fixes the constant of integration
        w = ZERO
        for i in range(0, k + 1):
            w = add(w, mul(pt(i), pt(k - i)))
        for i in range(0, k + 1):
            j = k - i
            w = add(w, mul(deriv(pt(i)), qt(j)), scale(mul(pt(i), deriv(qt(j))), -1))
        for i in range(0, k + 1):
            w = add(w, scale(mul(A, mul(qt(i), qt(k - i))), 2))
        target = _trim([Fraction(0)] * k + [Fraction((-1) ** k)])
        resid = add(w, scale(target, -1))
        # P_k enters the order-k identity as 2 P_k; the rest is already known
        const = -_coeff_at(resid, 0) / 2
        P[k] = add(p_new, (const,))
        if add(resid, (2 * const,)) != ZERO:
            raise ArithmeticError(f"Wronskian identity fails at order {k}")
    return tuple(P), tuple(Q)


def _coeff_at(p: Poly, i: int) -> Fraction:
    return p[i] if i < len(p) else Fraction(0)
