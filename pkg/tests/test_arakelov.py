import math
from fractions import Fraction

import numpy as np
import pytest

from h0quartic import arakelov as ar
from h0quartic import lattice as lat
from h0quartic import numfield
from h0quartic.errors import DomainError
from h0quartic.numfield import ONE, FieldElement

from conftest import TABLE_NAMES

E4PI = math.exp(-4 * math.pi)


def brute_theta(fd, em, D, M):
    """Partial theta sum by summing over the coordinate box of the twisted Gram matrix."""
    G = lat.gram(fd, em, D.twist, D.ideal_basis)
    box = lat.coordinate_box(G, M)
    svs = lat.box_enumerate(G, M, box)
    return svs, 1 + 2 * sum(math.exp(-math.pi * L) for L in svs.lengths_sq)


# --- lengths -----------------------------------------------------------------

def test_twisted_length_examples(f01):
    fd, em = f01
    assert ar.twisted_norm_sq(fd, em, ar.ArakelovDivisor.torus(1.0), ONE) == pytest.approx(4.0, rel=1e-14)
    s = 0.8722
    assert ar.twisted_norm_sq(fd, em, ar.ArakelovDivisor.torus(s), ONE) == pytest.approx(
        2 * s * s + 2 / (s * s), rel=1e-14)
    e2 = em.abs2(fd.unit)[0]
    assert ar.twisted_norm_sq(fd, em, ar.ArakelovDivisor.torus(1.0), fd.unit) == pytest.approx(
        2 * e2 + 2 / e2, rel=1e-10)


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_torus_closed_form(name, field_maps, rng):
    fd, em = field_maps[name]
    pool = ar.TorusPool(fd, em, 12.0)
    for s in rng.uniform(0.8, 1.25, size=5):
        D = ar.ArakelovDivisor.torus(s)
        for v, N in zip(pool.coords[:40], pool.norms[:40]):
            a, _ = em.abs2(v)
            closed = 2 * s * s * a + 2 * N / (s * s * a)
            assert ar.twisted_norm_sq(fd, em, D, v) == pytest.approx(closed, rel=1e-10)


def test_divisor_validation():
    with pytest.raises(DomainError):
        ar.ArakelovDivisor.torus(0.0)
    with pytest.raises(DomainError):
        ar.ArakelovDivisor(twist=(1.0, -1.0))
    with pytest.raises(ValueError):
        ar.ArakelovDivisor(ideal_basis=np.eye(3))
    D = ar.ArakelovDivisor.degree_zero(np.eye(4, dtype=np.int64), Fraction(16), 1.3)
    assert D.degree == pytest.approx(0.0, abs=1e-14)
    assert ar.ArakelovDivisor.torus(0.7).degree == pytest.approx(0.0, abs=1e-14)
    assert ar.ArakelovDivisor.trivial().is_principal_ideal


# --- theta enclosures --------------------------------------------------------

@pytest.mark.parametrize("name", TABLE_NAMES)
def test_k0_trivial_divisor(name, field_maps):
    fd, em = field_maps[name]
    enc = ar.k0(fd, em, ar.ArakelovDivisor.trivial())
    assert enc.lower == enc.partial_sum
    assert enc.lower >= 1 and enc.tail_bound >= 0
    assert enc.upper == pytest.approx(enc.partial_sum + enc.tail_bound, abs=1e-15)
    # the torsion alone gives 1 + omega e^{-4 pi}; when nothing else is visible at binary64
    # the outward rounding leaves the lower end a relative 1e-9 of that term below it
    floor = 1 + fd.omega * E4PI
    assert enc.upper > floor
    assert enc.lower > 1 + fd.omega * E4PI * (1 - 2e-9)
    assert enc.width < 1e-12
    h = ar.h0(fd, em, ar.ArakelovDivisor.trivial())
    assert h.hi > math.log(floor) > 0
    assert h.lo > math.log1p(fd.omega * E4PI * (1 - 2e-9))
    assert h.width <= enc.width


def test_k0_omega_two_lower_bound(field_maps):
    for fd, em in field_maps.values():
        if fd.omega == 2:
            assert ar.k0(fd, em, ar.ArakelovDivisor.trivial()).lower > 1 + 6.95e-6


def test_k0_width_budget(f01):
    # the tail term is far below 1e-30; what remains is float slop on the partial sum
    enc = ar.k0(*f01, ar.ArakelovDivisor.torus(1.0))
    assert ar.tail_bound(2, 40) < 1e-30
    assert enc.width < 1e-12


def test_k0_q5i_prime_ideal_is_small():
    fd = numfield.load_field("q5i")
    em = numfield.embeddings(fd)
    B, n = numfield.prime_ideals_over(fd, 2)[0]
    D = ar.ArakelovDivisor.degree_zero(B, n)
    G = lat.gram(fd, em, D.twist, D.ideal_basis)
    assert lat.shortest_length_sq(G) >= 4 * math.sqrt(2)
    assert ar.k0(fd, em, D).upper < 1 + 2.673e-6


def test_k0_domain_errors(f01):
    fd, em = f01
    with pytest.raises(DomainError):
        ar.k0(fd, em, ar.ArakelovDivisor.trivial(), a_lower=0)
    with pytest.raises(DomainError):
        ar.k0(fd, em, ar.ArakelovDivisor.trivial(), a_lower=2.1)
    with pytest.raises(DomainError):
        ar.k0(fd, em, ar.ArakelovDivisor.trivial(), cutoff_M=3.0)


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_cutoff_20_and_40_overlap(name, field_maps, rng):
    fd, em = field_maps[name]
    for s in rng.uniform(0.8, 1.25, size=10):
        D = ar.ArakelovDivisor.torus(s)
        a = ar.k0(fd, em, D, 20.0).interval()
        b = ar.k0(fd, em, D, 40.0).interval()
        assert a.lo <= b.hi and b.lo <= a.hi


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_partial_sum_matches_box_summation(name, field_maps, rng):
    fd, em = field_maps[name]
    for s in (1.0, *rng.uniform(0.85, 1.18, size=3)):
        D = ar.ArakelovDivisor.torus(s)
        G = lat.gram(fd, em, D.twist)
        fp = lat.enumerate_short(G, 11.0)
        svs, brute = brute_theta(fd, em, D, 11.0)
        assert set(fp.vectors) == set(svs.vectors)
        lengths = [ar.twisted_norm_sq(fd, em, D, v) for v in fp.vectors]
        ours = 1 + 2 * math.fsum(math.exp(-math.pi * L) for L in lengths)
        assert ours == pytest.approx(brute, rel=1e-14)


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_symmetry_and_periodicity(name, field_maps, rng):
    fd, em = field_maps[name]
    period = numfield.unit_abs(fd, em)
    for s in rng.uniform(0.7, 1.4, size=20):
        a = ar.k0(fd, em, ar.ArakelovDivisor.torus(s))
        b = ar.k0(fd, em, ar.ArakelovDivisor.torus(1 / s))
        mid = lambda e: 0.5 * (e.lower + e.upper)
        assert abs(mid(a) - mid(b)) <= a.width + b.width
    h1 = ar.h0(fd, em, ar.ArakelovDivisor.torus(1.0))
    hp = ar.h0(fd, em, ar.ArakelovDivisor.torus(period))
    assert abs(h1.mid - hp.mid) <= 1e-10
    assert abs(h1.mid - hp.mid) <= h1.width + hp.width


@pytest.mark.parametrize("name", ["f01", "f09", "f19"])
def test_pool_agrees_with_direct_enumeration(name, field_maps):
    fd, em = field_maps[name]
    pool = ar.TorusPool.for_range(fd, em, 0.8, 1.25)
    for s in (0.8, 0.93, 1.0, 1.2):
        p = pool.k0(s).interval()
        d = ar.k0(fd, em, ar.ArakelovDivisor.torus(s)).interval()
        assert p.lo <= d.hi and d.lo <= p.hi
    with pytest.raises(DomainError):
        pool.k0(0.5)


def test_torus_samples_and_scan(f01):
    ss = ar.torus_samples(0.5, 2.0, 5)
    assert np.allclose(np.log(ss), np.linspace(math.log(0.5), math.log(2.0), 5))
    assert len(ar.torus_samples(0.5, 2.0, 4, endpoint=False)) == 4
    with pytest.raises(DomainError):
        ar.torus_samples(1.0, 0.5, 4)
    with pytest.raises(DomainError):
        ar.torus_samples(0.5, 1.0, 1)
    rows = ar.period_scan(*f01, n=64)
    assert len(rows) == 64
    assert rows[32][0] == pytest.approx(1.0, abs=1e-15)
    assert max(range(64), key=lambda k: rows[k][1]) == 32


# --- shells and small-norm sets ---------------------------------------------

BJ_EXAMPLES = [("f06", 2, 8), ("f16", 2, 0), ("f16", 3, 6), ("f02", 3, 0)]


@pytest.mark.parametrize("name, j, count", BJ_EXAMPLES)
def test_bj_examples(name, j, count, field_maps):
    fd, em = field_maps[name]
    for s in np.linspace(0.8722, 1 / 0.8722, 17):
        assert len(ar.bj_set(fd, em, float(s), j)) == count


def test_bj_field_2_near_one(field_maps):
    fd, em = field_maps["f02"]
    for s in np.linspace(0.98, 1 / 0.98, 9):
        assert len(ar.bj_set(fd, em, float(s), 2)) == 6


@pytest.mark.xfail(strict=True, reason="#B_2 for row 2 drops below 6 near the ends of [0.8722, 1/0.8722]")
def test_bj_field_2_whole_range(field_maps):
    fd, em = field_maps["f02"]
    for s in np.linspace(0.8722, 1 / 0.8722, 33):
        assert len(ar.bj_set(fd, em, float(s), 2)) == 6


def test_bj_validation(f01):
    with pytest.raises(DomainError):
        ar.bj_set(*f01, 0.5, 2)
    with pytest.raises(DomainError):
        ar.bj_set(*f01, 1.0, 4)


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_bj_elements_have_the_right_norm_and_length(name, field_maps):
    fd, em = field_maps[name]
    for j in (2, 3):
        for s in (0.8722, 1.0, 1.1):
            for x in ar.bj_set(fd, em, s, j):
                assert abs(numfield.norm(fd, x)) == j
                assert ar.twisted_norm_sq(fd, em, ar.ArakelovDivisor.torus(s), x) < 8


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_b1_at_one_is_torsion(name, field_maps):
    # torsion sits at length exactly 4; eps^{+-1} has length 2|eps|^2 + 2/|eps|^2 = 4 cosh R,
    # which lies inside [4, 4 sqrt 2) exactly when R < arccosh(sqrt 2)
    fd, em = field_maps[name]
    b1 = ar.bm_set(fd, em, 1.0, 1)
    roots = {tuple(z.coords) for z in numfield.roots_of_unity(fd, em)}
    at_four = {e.element.coords for e in b1 if abs(e.length_sq - 4) < 1e-9}
    assert at_four == roots
    R = numfield.regulator(fd, em)
    if R >= math.acosh(math.sqrt(2)):
        assert len(b1) == fd.omega
    else:
        assert len(b1) == 3 * fd.omega


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_shell_norms_bounded_by_index(name, field_maps):
    fd, em = field_maps[name]
    for s in (0.9, 1.0, 1.07):
        for m in (1, 2, 3, 4):
            for e in ar.bm_set(fd, em, s, m):
                assert 1 <= e.norm <= m
                assert 4 * math.sqrt(m) - 1e-9 <= e.length_sq < 4 * math.sqrt(m + 1) + 1e-9


def test_bm_validation(f01):
    with pytest.raises(DomainError):
        ar.bm_set(*f01, 1.0, 0)


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_shell_partition(name, field_maps):
    fd, em = field_maps[name]
    s = 0.96
    D = ar.ArakelovDivisor.torus(s)
    G = lat.gram(fd, em, D.twist)
    svs = lat.enumerate_short(G, 12.0)
    every = set()
    for v in svs.vectors:
        x = FieldElement(v)
        every |= {x.coords, (-x).coords}
    shells = [{e.element.coords for e in ar.bm_set(fd, em, s, m)} for m in (1, 2, 3)]
    outer = {c for c in every if ar.twisted_norm_sq(fd, em, D, c) >= 8}
    parts = shells + [outer]
    assert sum(len(p) for p in parts) == len(every)
    assert set().union(*parts) == every


def test_field_7_small_shells_are_unit_powers(field_maps):
    fd, em = field_maps["f07"]
    torsion = numfield.roots_of_unity(fd, em)
    units = ar.unit_powers(fd)
    allowed = {numfield.mul(fd, z, u).coords for z in torsion for u in units}
    for s in np.linspace(0.98, 1 / 0.98, 7):
        for m in (1, 2, 3):
            for e in ar.bm_set(fd, em, float(s), m):
                assert e.element.coords in allowed


# --- second derivative -------------------------------------------------------

def test_G_value_at_one(f01):
    assert ar.G_value(*f01, 1.0, ONE) == pytest.approx(-4 * E4PI, rel=1e-12)
    assert -4 * E4PI == pytest.approx(-1.3949e-5, rel=1e-4)
    with pytest.raises(DomainError):
        ar.G_value(*f01, 1.0, (0, 0, 0, 0))


def test_G_positive_band():
    zs = np.exp(np.linspace(0.54, 2 * math.log(1 + math.sqrt(2)), 400))
    assert np.all(ar.G_of_z(zs, 1) > 0)
    assert ar.G_of_z(1.0, 1) < 0
    zs = np.linspace(math.sqrt(3) - 1, math.sqrt(3) + 1, 400)[1:-1]
    assert np.all(ar.G_of_z(zs, 2) < 5.5e-8)


def test_G_interval_contains_point_values():
    from h0quartic.interval import Interval
    for z in (0.3, 1.0, 2.7, 5.0):
        for N in (1, 2, 3):
            iv = ar.G_interval(Interval(z * 0.999, z * 1.001), N)
            assert iv.lo <= float(ar.G_of_z(z, N)) <= iv.hi


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_gpp_certificate_negative_at_one(name, field_maps):
    fd, em = field_maps[name]
    t = ar.gpp_terms(fd, em, 1.0)
    assert t.T4_upper < 3.9e-7
    assert t.certificate_negative
    assert t.gpp_upper == pytest.approx(4 * math.pi * t.total_upper)


def test_T1_omega_two_at_one(field_maps):
    # B_1 at s = 1 is just +-1 when omega = 2 and R >= arccosh(sqrt 2)
    fd, em = field_maps["f19"]
    assert fd.omega == 2
    T1 = ar.gpp_terms(fd, em, 1.0).T1
    assert T1.lo <= 2 * -4 * E4PI <= T1.hi
    assert T1.hi < -2.22e-5


@pytest.mark.parametrize("name", ["f01", "f05", "f13", "f19"])
@pytest.mark.parametrize("s", [0.95, 1.0, 1.05])
def test_gpp_matches_finite_difference(name, s, field_maps):
    fd, em = field_maps[name]
    pool = ar.TorusPool(fd, em, 40.0)
    h = 1e-4
    fd2 = (ar.g_truncated(pool, s + h, 30.0) - 2 * ar.g_truncated(pool, s, 30.0)
           + ar.g_truncated(pool, s - h, 30.0)) / (h * h)
    assert abs(ar.gpp_truncated(pool, s, 30.0) - fd2) < 1e-6


def test_unit_powers_exact(f01):
    fd, em = f01
    one, e, ei, e2, ei2 = ar.unit_powers(fd)
    assert one == ONE
    assert numfield.mul(fd, e, ei) == ONE
    assert numfield.mul(fd, e2, ei2) == ONE


def test_frak_g_examples(field_maps):
    for name, bound in (("f01", -2.7e-6), ("f02", -8.2e-6)):
        fd, em = field_maps[name]
        worst = max(ar.frak_g(fd, em, float(s)) for s in np.linspace(0.98, 1 / 0.98, 41))
        assert worst <= bound


def test_frak_g_interval_encloses_point_values(f01):
    from h0quartic.interval import Interval
    fd, em = f01
    eps = Interval(numfield.unit_abs(fd, em))
    for s in (0.98, 1.0, 1.01):
        iv = ar.frak_g_interval(Interval(s), eps, fd.omega)
        assert iv.lo <= ar.frak_g(fd, em, s) <= iv.hi
