import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h0quartic import special
from h0quartic.errors import DomainError
from h0quartic.interval import SQRT2, SQRT3, Interval


def tail_oracle(a, M):
    """Adaptive quadrature of the tail integral, independent of the gamma recurrence."""
    with mpmath.workdps(40):
        a, M = mpmath.mpf(a), mpmath.mpf(M)
        C = (2 * mpmath.sqrt(M) / a - 1) ** 4
        # shift to t = M + u so the exponential factor stays O(1)
        f = lambda u: ((2 * mpmath.sqrt(M + u) / a + 1) ** 4 - C) * mpmath.exp(-mpmath.pi * u)
        return mpmath.pi * mpmath.exp(-mpmath.pi * M) * mpmath.quad(f, [0, 1, 4, 16, mpmath.inf])


@pytest.mark.parametrize("twice_s", range(1, 12))
@pytest.mark.parametrize("x", [0.3, 2.0, 17.77, 40 * math.pi])
def test_upper_gamma_half_against_mpmath(twice_s, x):
    r = special.upper_gamma_half(twice_s, x)
    with mpmath.workdps(40):
        v = mpmath.gammainc(mpmath.mpf(twice_s) / 2, mpmath.mpf(x))
    assert r.lo <= v <= r.hi
    assert r.width <= 1e-12 * float(v)


def test_upper_gamma_domain():
    with pytest.raises(DomainError):
        special.upper_gamma_half(0, 1.0)
    with pytest.raises(DomainError):
        special.upper_gamma_half(3, 0.0)


def test_tail_constants():
    assert special.tail_bound(2, 4 * math.sqrt(2)) <= 2.6729e-6
    assert special.tail_bound(2, 4 * math.sqrt(3)) <= 6.3067e-8
    assert special.tail_bound_interval(2, 4 * SQRT2).hi < 2.6729e-6
    assert special.tail_bound_interval(2, 4 * SQRT3).hi < 6.3067e-8


@pytest.mark.parametrize("a,M", [(2, 4 * math.sqrt(2)), (2, 4 * math.sqrt(3)), (2, 8), (1.5, 3), (2, 40)])
def test_tail_matches_quadrature(a, M):
    closed = special.tail_bound_interval(a, M)
    q = tail_oracle(a, M)
    assert abs(closed.mid - float(q)) <= 1e-12 * float(q)


def test_tail_monotone_and_small_at_default_cutoff():
    assert special.tail_bound(2, 9) < special.tail_bound(2, 8)
    assert special.tail_bound(2, 16) < special.tail_bound(2, 4 * math.sqrt(3))
    assert special.tail_bound(2, 40) < 1e-30


def test_tail_domain():
    with pytest.raises(DomainError):
        special.tail_bound(2, 3.9)


def test_annulus_count_bound_value():
    v = special.annulus_count_bound(2, 4 * math.sqrt(2), 4 * math.sqrt(2))
    r = math.sqrt(4 * math.sqrt(2))
    assert v == pytest.approx((r + 1) ** 4 - (r - 1) ** 4)
    assert v == pytest.approx(126.7, abs=0.05)


@settings(max_examples=60)
@given(st.floats(min_value=1.0, max_value=2.0), st.floats(min_value=0.0, max_value=10.0))
def test_annulus_count_bound_decreasing_in_a(a, extra):
    M = 4.5
    t = M + extra
    assert special.annulus_count_bound(a, M, t) >= special.annulus_count_bound(a + 0.01, M, t)


def test_annulus_count_bound_domain():
    with pytest.raises(DomainError):
        special.annulus_count_bound(2, 3, 5)
    with pytest.raises(DomainError):
        special.annulus_count_bound(2, 6, 5)


def second_derivative_tail_oracle(M=8.0, extra_pi=False):
    with mpmath.workdps(40):
        pi = mpmath.pi
        C = (mpmath.sqrt(M) - 1) ** 4
        h = lambda t: (pi ** 2 * t ** 2 - 5 * pi * t / 2 - 16 * pi ** 2 + mpmath.mpf(1) / 2) * mpmath.exp(-pi * t)
        v = mpmath.quad(lambda t: ((mpmath.sqrt(t) + 1) ** 4 - C) * h(t), [M, M + 4, M + 20, mpmath.inf])
        return pi * v if extra_pi else v


def test_second_derivative_tail_bound():
    v = special.second_derivative_tail_interval(8)
    assert v.hi < 3.9e-7
    assert abs(v.mid - float(second_derivative_tail_oracle())) < 1e-18
    assert v.mid == pytest.approx(3.8931e-7, rel=1e-4)


def test_second_derivative_tail_with_extra_pi_exceeds_bound():
    v = special.second_derivative_tail_interval(8, extra_pi=True)
    assert abs(v.mid - float(second_derivative_tail_oracle(extra_pi=True))) < 1e-17
    assert v.lo > 3.9e-7


def test_integrand_positive_beyond_eight():
    # the count bound may replace the true count only where h > 0
    for t in [8 + k / 10 for k in range(200)]:
        h = (math.pi ** 2 * t * t - 2.5 * math.pi * t - 16 * math.pi ** 2 + 0.5)
        assert h > 0


def test_sqrt_poly_exp_integral_simple():
    # int_M^inf e^(-pi t) dt = e^(-pi M) / pi
    r = special.sqrt_poly_exp_integral([1], Interval(2.0))
    assert r.contains(math.exp(-2 * math.pi) / math.pi)
