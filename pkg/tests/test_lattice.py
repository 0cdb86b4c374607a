import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h0quartic import lattice as lat
from h0quartic.errors import DomainError, SingularBasis

from conftest import TABLE_NAMES


def twisted(fd, em, s):
    return lat.gram(fd, em, (s, 1 / s))


def test_gram_validation():
    with pytest.raises(ValueError):
        lat.GramMatrix(np.eye(3))
    with pytest.raises(ValueError):
        lat.GramMatrix(np.array([[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
    with pytest.raises(SingularBasis):
        lat.GramMatrix(np.diag([1.0, 1.0, 1.0, 0.0]))


def test_twist_must_be_positive(f01):
    with pytest.raises(DomainError):
        lat.gram(*f01, (0.0, 1.0))


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_lll_is_unimodular_and_reduced(name, field_maps):
    fd, em = field_maps[name]
    G = twisted(fd, em, 0.9)
    red, T = lat.lll_reduce(G)
    assert round(abs(np.linalg.det(T.astype(float)))) == 1
    assert np.allclose(T.T @ G.entries @ T, red.entries)
    mu, bstar = lat._gso(red.entries)
    assert np.all(np.abs(np.tril(mu, -1)) <= 0.5 + 1e-9)
    for k in range(1, 4):
        assert bstar[k] >= (lat.LLL_DELTA - mu[k, k - 1] ** 2) * bstar[k - 1] - 1e-9
    # reducing again keeps the Gram-Schmidt profile (up to size-reduction ties)
    red2, _ = lat.lll_reduce(red)
    assert np.allclose(lat._gso(red2.entries)[1], bstar, rtol=1e-9)


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_shortest_vector_is_a_root_of_unity(name, field_maps):
    fd, em = field_maps[name]
    G = lat.gram(fd, em)
    assert lat.shortest_length_sq(G) == pytest.approx(4.0, abs=1e-9)
    assert len(lat.enumerate_short(G, 3.9)) == 0
    assert len(lat.enumerate_short(G, 4.0)) == fd.omega // 2


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_bound_11_within_lll_box(name, field_maps):
    fd, em = field_maps[name]
    G = lat.gram(fd, em)
    red, T = lat.lll_reduce(G)
    box = lat.lll_box(red.entries[0, 0], 11.0)
    assert box == [15, 10, 7, 4]
    brute = lat.box_enumerate(red, 11.0, box)
    fp = lat.enumerate_short(red, 11.0)
    assert set(brute.vectors) == set(fp.vectors)


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_enumeration_matches_box_search_on_random_twists(name, field_maps):
    fd, em = field_maps[name]
    rnd = np.random.default_rng(sum(map(ord, name)))
    for s in rnd.uniform(0.8, 1.25, size=50):
        G = twisted(fd, em, s)
        box = lat.coordinate_box(G, 16.0)
        brute = lat.box_enumerate(G, 16.0, box)
        fp = lat.enumerate_short(G, 16.0)
        assert set(fp.vectors) == set(brute.vectors)
        assert np.allclose(fp.lengths_sq, brute.lengths_sq, rtol=1e-12)


def test_coordinate_box_is_tight_for_diagonal():
    G = lat.GramMatrix(np.diag([1.0, 4.0, 9.0, 16.0]))
    assert lat.coordinate_box(G, 16.0) == [4, 2, 1, 1]
    assert len(lat.enumerate_short(G, 16.0)) == len(lat.box_enumerate(G, 16.0, [4, 2, 1, 1]))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.8, 1.25), st.floats(0.5, 3.0))
def test_homogeneity_of_shortest_length(s, c):
    from h0quartic import numfield
    fd = numfield.load_field("f04")
    em = numfield.embeddings(fd)
    G = twisted(fd, em, s)
    assert lat.shortest_length_sq(G.scaled(c)) == pytest.approx(c * lat.shortest_length_sq(G), rel=1e-10)


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_shortest_length_in_window(name, field_maps):
    # roots of unity have twisted length 2 s^2 + 2 / s^2, so lambda_1^2 is at most that
    fd, em = field_maps[name]
    for s in (0.8722, 0.95, 1.0, 1.1465):
        lam = lat.shortest_length_sq(twisted(fd, em, s))
        assert 0 < lam <= 2 * s * s + 2 / (s * s) + 1e-9
        if s == 1.0:
            assert lam == pytest.approx(4.0, abs=1e-9)


def test_enumeration_sorted_and_canonical(f01):
    svs = lat.enumerate_short(twisted(*f01, 0.93), 20.0)
    assert list(svs.lengths_sq) == sorted(svs.lengths_sq)
    for v in svs.vectors:
        first = next(c for c in v if c)
        assert first > 0
    assert svs.as_array().shape == (len(svs), 4)
    assert lat.enumerate_short(twisted(*f01, 0.93), -1.0).as_array().shape == (0, 4)


def test_count_annulus(f01):
    G = twisted(*f01, 0.97)
    svs = lat.enumerate_short(G, 30.0)
    assert lat.count_annulus(G, 8.0, 30.0) == 2 * sum(1 for L in svs.lengths_sq if L >= 8.0)
    assert lat.count_annulus(G, 1.0, 3.0) == 0
    with pytest.raises(DomainError):
        lat.count_annulus(G, 5.0, 4.0)
    with pytest.raises(DomainError):
        lat.count_annulus(G, 0.0, 4.0)


@pytest.mark.parametrize("name", TABLE_NAMES)
def test_annulus_bound_dominates_counts(name, field_maps):
    from h0quartic.special import annulus_count_bound
    fd, em = field_maps[name]
    rnd = np.random.default_rng(7)
    M = 4.5
    for s in rnd.uniform(0.8722, 1 / 0.8722, size=20):
        G = twisted(fd, em, s)
        for t in (5.0, 8.0, 16.0, 30.0):
            assert lat.count_annulus(G, M, t) <= annulus_count_bound(2.0, M, t)
