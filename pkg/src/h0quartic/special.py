"""Upper incomplete gamma at half-integer orders and the Gaussian tail integrals
built from it.

All integrals here have the shape ``int_M^inf P(sqrt t) exp(-pi t) dt`` for a
polynomial ``P``; substituting ``x = pi t`` turns each monomial ``t^(k/2)``
into ``pi^-(k/2+1) * Gamma(k/2 + 1, pi M)``.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import DomainError
from .interval import PI, Interval, exp, sqrt

SQRT_PI = sqrt(PI)


def upper_gamma_half(twice_s: int, x) -> Interval:
    """Enclosure of Gamma(twice_s / 2, x) for ``twice_s >= 1`` and ``x > 0``.

    Upward recurrence Gamma(s+1, x) = s Gamma(s, x) + x^s e^-x from
    Gamma(1, x) = e^-x or Gamma(1/2, x) = sqrt(pi) erfc(sqrt x). Every term
    is positive so the recurrence does not cancel.
    """
    if twice_s < 1:
        raise DomainError("order must be a positive half-integer")
    x = x if isinstance(x, Interval) else Interval(x)
    if x.lo <= 0.0:
        raise DomainError("argument must be positive")
    ex = exp(-x)
    if twice_s % 2 == 0:
        s2, g = 2, ex
    else:
        s2, g = 1, SQRT_PI * sqrt(x).erfc()
    sqrt_x = sqrt(x)
    while s2 < twice_s:
        s = Fraction(s2, 2)
        # x^s with s a half-integer
        xs = x ** (s2 // 2) * (sqrt_x if s2 % 2 else 1)
        g = s * g + xs * ex
        s2 += 2
    return g


def sqrt_poly_exp_integral(coeffs, M) -> Interval:
    """``int_M^inf sum_k coeffs[k] t^(k/2) exp(-pi t) dt`` as an interval."""
    M = M if isinstance(M, Interval) else Interval(M)
    x = PI * M
    total = Interval(0)
    for k, c in enumerate(coeffs):
        if isinstance(c, (int, Fraction)) and c == 0:
            continue
        # pi^-(k/2 + 1)
        pk = PI ** (k // 2 + 1) * (SQRT_PI if k % 2 else 1)
        total = total + c * upper_gamma_half(k + 2, x) / pk
    return total


def annulus_count_bound(a, M, t):
    """(2 sqrt(t)/a + 1)^4 - (2 sqrt(M)/a - 1)^4, the disjoint-balls count bound."""
    if not (t >= M >= a * a > 0):
        raise DomainError(f"need t >= M >= a^2 > 0, got a={a}, M={M}, t={t}")
    return (2 * t ** 0.5 / a + 1) ** 4 - (2 * M ** 0.5 / a - 1) ** 4


def tail_bound_interval(a, M) -> Interval:
    """Enclosure of pi * int_M^inf ((2 sqrt t/a + 1)^4 - (2 sqrt M/a - 1)^4) e^(-pi t) dt."""
    a = a if isinstance(a, Interval) else Interval(a)
    M = M if isinstance(M, Interval) else Interval(M)
    if a.lo <= 0.0:
        raise DomainError("a must be positive")
    if M.hi < (a * a).lo:
        raise DomainError(f"tail bound needs M >= a^2 (a={a!r}, M={M!r})")
    c = 2 / a
    C = (c * sqrt(M) - 1) ** 4
    coeffs = [comb(4, k) * c ** k for k in range(5)]
    coeffs[0] = coeffs[0] - C
    return PI * sqrt_poly_exp_integral(coeffs, M)


def tail_bound(a: float, M: float) -> float:
    """Certified upper bound on sum_{|f|^2 >= M} exp(-pi |f|^2) when a <= lambda."""
    if M < a * a:
        raise DomainError(f"tail bound needs M >= a^2, got a={a}, M={M}")
    return tail_bound_interval(a, M).hi


def _poly_mul(p, q):
    out = [Interval(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] = out[i + j] + x * y
    return out


def second_derivative_tail_interval(M=8, extra_pi: bool = False) -> Interval:
    """Enclosure of int_M^inf ((sqrt t + 1)^4 - (sqrt M - 1)^4) h(t) dt with
    h(t) = (pi^2 t^2 - 5 pi t / 2 - 16 pi^2 + 1/2) e^(-pi t).

    ``h`` is minus the derivative of (pi t^2 - t/2 - 16 pi) e^(-pi t), so the
    integral bounds the sum of second-derivative terms G over lattice
    points with |ux|^2 >= M. ``extra_pi`` multiplies by a further pi, the
    looser variant sometimes written for this bound.
    """
    M = M if isinstance(M, Interval) else Interval(M)
    C = (sqrt(M) - 1) ** 4
    count = [Interval(1) - C, Interval(4), Interval(6), Interval(4), Interval(1)]
    pi2 = PI * PI
    h = [Interval(0.5) - 16 * pi2, Interval(0), -2.5 * PI, Interval(0), pi2]
    val = sqrt_poly_exp_integral(_poly_mul(count, h), M)
    return PI * val if extra_pi else val
