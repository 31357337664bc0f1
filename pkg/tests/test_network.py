from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tsystem.algebra import LaurentPolynomial, laurent_is_positive
from tsystem.lattice import InitialSurface, TField, evolve_to, square_sites
from tsystem.network import (
    DiamondExceedsSurface,
    build_diamond,
    count_paths,
    lgv_bruteforce,
    path_matrix,
    t_via_network,
)
from tsystem.condensation import bareiss_determinant


def sym(radius=4):
    return InitialSurface.flat(square_sites(radius))


def rand_surface(rng, radius=4):
    return InitialSurface.flat(square_sites(radius), lambda i, j: Fraction(rng.randint(1, 12), rng.randint(1, 12)))


def centers(k):
    return [(i, j) for i, j in [(0, 0), (0, 1), (1, 0), (1, 1)] if (i + j + k) % 2 == 1]


def test_k1_is_identity():
    s = sym()
    for i, j in centers(1):
        d = build_diamond(s, i, j, 1)
        assert len(d.left_ports) == len(d.right_ports) == 1
        assert t_via_network(d) == s.value(i, j)


def test_local_weights():
    # the up triangle f = (0, 1) with a = (-1, 0), b = (-1, 1), c = (0, 2), d = (1, 1), e = (0, 0)
    d = build_diamond(sym(), 0, 1, 4)
    x = LaurentPolynomial.var
    weights = {(s, t): w for s, t, w in d.edges}
    top, bl, br = (0, 3), (-1, 1), (1, 1)
    assert weights[(bl, top)] == x(-1, 0) * x(0, 1, -1)
    assert weights[(top, br)] == x(0, 2) * x(1, 1, -1)
    assert weights[(bl, br)] == x(-1, 0) * x(-1, 1) * x(0, 0, -1) * x(0, 1, -1)
    assert all(w.is_monomial() for _, _, w in d.edges)


def test_all_ones_weights():
    s = InitialSurface.flat(square_sites(4), lambda i, j: 1)
    d = build_diamond(s, 0, 1, 4)
    assert all(w == 1 for _, _, w in d.edges)
    assert all(s_[0] < t[0] for s_, t, _ in d.edges)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_all_ones_matrix_counts_paths(k):
    s = InitialSurface.flat(square_sites(4), lambda i, j: 1)
    i, j = centers(k)[0]
    d = build_diamond(s, i, j, k)
    m = path_matrix(d)
    assert m == count_paths(d)
    assert all(isinstance(v, int) or v.denominator == 1 for row in m for v in row)
    if k == 1:
        assert m[0][0] >= 1


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_matches_evolution_on_random_surfaces(k):
    rng = random.Random(100 + k)
    for _ in range(20):
        s = rand_surface(rng)
        for i, j in centers(k):
            assert t_via_network(build_diamond(s, i, j, k)) == evolve_to(TField(s), (i, j, k))


@pytest.mark.parametrize("k", [2, 3])
def test_matches_evolution_symbolically(k):
    s = sym()
    for i, j in centers(k):
        d = build_diamond(s, i, j, k)
        assert t_via_network(d) == evolve_to(TField(s), (i, j, k))
        for row in path_matrix(d):
            for v in row:
                assert laurent_is_positive(v)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lgv_bruteforce(k):
    s = sym()
    i, j = centers(k)[0]
    d = build_diamond(s, i, j, k)
    assert lgv_bruteforce(d) == bareiss_determinant(path_matrix(d))


def test_errors():
    with pytest.raises(DiamondExceedsSurface, match="diamond exceeds surface"):
        build_diamond(sym(2), 0, 1, 4)
    with pytest.raises(ValueError):
        build_diamond(sym(), 0, 0, 2)
