from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tsystem.algebra import LaurentPolynomial, LaurentRatio, laurent_is_positive
from tsystem.lattice import (
    EVEN,
    ODD,
    DegenerateData,
    InitialSurface,
    NotTwoInTwoOut,
    SingularYStep,
    TField,
    UnresolvedPoint,
    WindowExceeded,
    YField,
    b_matrix_entry,
    cluster_mutation,
    evolve_to,
    octahedron_step,
    octahedron_step_down,
    square_sites,
    symbol,
    y_from_t,
    y_step,
    y_system_residual,
)
from tsystem.network import build_diamond, t_via_network


def x(i, j):
    return LaurentPolynomial.var(i, j)


def ones(radius=4, parity=ODD):
    return TField(InitialSurface.flat(square_sites(radius), lambda i, j: 1, parity))


def five_point_field(neigh, below):
    """Field whose level-1 neighbours of (0,0) carry ``neigh`` and (0,0,0) carries ``below``."""
    vals = {(0, 0): below, (0, 1): neigh, (0, -1): neigh, (1, 0): neigh, (-1, 0): neigh}
    return TField(InitialSurface.flat(list(vals), vals, EVEN))


# --- octahedron step --------------------------------------------------------

def test_step_all_ones():
    assert octahedron_step(five_point_field(1, 1), (0, 0, 1)) == 2


def test_step_twos():
    assert octahedron_step(five_point_field(2, 1), (0, 0, 1)) == 8


def test_symbolic_step_on_even_surface():
    # (0,0,2) needs the surface through (0,0,0), i.e. the even-parity flat surface
    f = TField(InitialSurface.flat(square_sites(2), "sym", EVEN))
    assert evolve_to(f, (0, 0, 2)) == (x(0, 1) * x(0, -1) + x(1, 0) * x(-1, 0)) * LaurentPolynomial.var(0, 0, -1)


def test_step_errors():
    f = five_point_field(1, 1)
    with pytest.raises(UnresolvedPoint):
        octahedron_step(f, (5, 5, 1))
    with pytest.raises(DegenerateData, match="degenerate initial data"):
        octahedron_step(five_point_field(1, 0), (0, 0, 1))


# --- evolve_to --------------------------------------------------------------

def test_evolve_identity_on_surface():
    f = TField(InitialSurface.flat(square_sites(2)))
    assert evolve_to(f, (0, 0, 1)) == x(0, 0)


def test_evolve_all_ones_pattern():
    f = ones()
    assert evolve_to(f, (0, 1, 2)) == 2
    assert evolve_to(f, (0, 0, 3)) == 8
    # two levels below the surface mirrors two levels above
    assert evolve_to(f, (0, 1, -2)) == 8


def test_evolve_idempotent_and_cached():
    f = TField(InitialSurface.flat(square_sites(3)))
    a = evolve_to(f, (0, 1, 2))
    assert (0, 1, 2) in f.store
    assert evolve_to(f, (0, 1, 2)) is a


def test_symbolic_t014_against_network():
    surf = InitialSurface.flat(square_sites(4))
    v = evolve_to(TField(surf), (0, 1, 4))
    assert set(v.terms.values()) == {1}
    assert laurent_is_positive(v)
    assert t_via_network(build_diamond(surf, 0, 1, 4)) == v


def test_window_exceeded():
    with pytest.raises(WindowExceeded):
        evolve_to(ones(1), (0, 1, 6))


def test_wrong_parity_rejected():
    with pytest.raises(ValueError):
        evolve_to(ones(), (0, 0, 0))


def test_laurent_phenomenon_window():
    f = TField(InitialSurface.flat(square_sites(4)))
    seen = 0
    for k in range(-4, 5):
        for i, j in square_sites(4):
            if f.in_parity((i, j, k)):
                try:
                    v = evolve_to(f, (i, j, k))
                except WindowExceeded:
                    continue
                seen += 1
                assert laurent_is_positive(v)
    assert seen > 100


def test_reversibility_two_levels():
    rng = random.Random(3)
    surf = InitialSurface.flat(square_sites(5), lambda i, j: Fraction(rng.randint(1, 9), rng.randint(1, 9)))
    up = TField(surf)
    inner = [s for s in surf.sites() if max(map(abs, s)) <= 3]
    heights = {s: surf.height(*s) + 2 for s in inner}
    raised = InitialSurface(heights, {s: evolve_to(up, (*s, heights[s])) for s in inner})
    down = TField(raised)
    for s in inner:
        if max(map(abs, s)) <= 1:
            assert evolve_to(down, (*s, surf.height(*s))) == surf.value(*s)


def test_step_down_inverts_step():
    f = five_point_field(Fraction(3, 2), Fraction(5, 7))
    top = octahedron_step(f, (0, 0, 1))
    f.insert((0, 0, 2), top)
    f.store.pop((0, 0, 0), None)
    g = TField(InitialSurface.flat([(0, 1), (0, -1), (1, 0), (-1, 0)],
                                   lambda i, j: Fraction(3, 2), EVEN))
    g.insert((0, 0, 2), top)
    assert octahedron_step_down(g, (0, 0, 1)) == Fraction(5, 7)


# --- mutation and exchange matrix ------------------------------------------

def test_mutation_all_ones():
    surf = InitialSurface.flat(square_sites(2), lambda i, j: 1)
    m = cluster_mutation(surf, (0, 0))
    assert m.value(0, 0) == 2
    assert m.height(0, 0) == 1 - 2


def test_mutation_value():
    vals = {(0, 0): 1, (0, 1): 2, (0, -1): 2, (1, 0): 3, (-1, 0): 3}
    surf = InitialSurface.flat(list(vals), vals, EVEN)
    assert cluster_mutation(surf, (0, 0)).value(0, 0) == 13


def test_mutation_involution():
    surf = InitialSurface.flat(square_sites(2))
    assert cluster_mutation(cluster_mutation(surf, (0, 1)), (0, 1)) == surf


def test_mutation_matches_step():
    surf = InitialSurface.flat(square_sites(2))
    f = TField(surf)
    m = cluster_mutation(surf, (0, 0))
    assert m.value(0, 0) == evolve_to(f, (0, 0, m.height(0, 0)))


def test_mutation_needs_extremum():
    surf = InitialSurface.flat(square_sites(2))
    with pytest.raises(NotTwoInTwoOut, match="vertex not two-in-two-out"):
        cluster_mutation(surf, (2, 2))
    bumped = cluster_mutation(surf, (0, 0))
    with pytest.raises(NotTwoInTwoOut):
        cluster_mutation(bumped, (0, 1))


def test_b_matrix_examples():
    assert b_matrix_entry((0, 0), (0, 1)) == 1
    assert b_matrix_entry((0, 0), (1, 0)) == -1
    assert b_matrix_entry((0, 0), (2, 5)) == 0


def test_b_matrix_skew():
    sites = [(i, j) for i in range(-3, 4) for j in range(-3, 4)]
    for a in sites:
        for b in sites:
            assert b_matrix_entry(a, b) == -b_matrix_entry(b, a)


# --- Y-system ---------------------------------------------------------------

def test_y_from_t_examples():
    assert y_from_t(ones(), (0, 0, 0)) == 1
    vals = {(1, 0): 2, (-1, 0): 2, (0, 1): 1, (0, -1): 1}
    f = TField(InitialSurface.flat(list(vals), vals, ODD))
    assert y_from_t(f, (0, 0, 0)) == 4


def test_y_from_t_symbolic_monomial_ratio():
    f = TField(InitialSurface.flat(square_sites(2)))
    y = y_from_t(f, (0, 0, 0))
    assert isinstance(y, LaurentRatio)
    assert y == LaurentRatio(x(1, 0) * x(-1, 0), x(0, 1) * x(0, -1))


def test_y_from_t_degenerate():
    vals = {(1, 0): 2, (-1, 0): 2, (0, 1): 0, (0, -1): 1}
    f = TField(InitialSurface.flat(list(vals), vals, ODD))
    with pytest.raises(DegenerateData, match="degenerate"):
        y_from_t(f, (0, 0, 0))


def _y_base(level_k, level_km1):
    base = {}
    for (i, j), v in level_k.items():
        base[(i, j, 1)] = v
    for (i, j), v in level_km1.items():
        base[(i, j, 0)] = v
    return YField(base)


def test_y_step_examples():
    one = Fraction(1)
    yf = _y_base({(1, 0): one, (-1, 0): one, (0, 1): one, (0, -1): one}, {(0, 0): one})
    assert y_step(yf, (0, 0, 1)) == 1
    yf = _y_base({(1, 0): one, (-1, 0): one, (0, 1): one, (0, -1): one}, {(0, 0): Fraction(4)})
    assert y_step(yf, (0, 0, 1)) == Fraction(1, 4)


def test_y_step_singular():
    one = Fraction(1)
    yf = _y_base({(1, 0): one, (-1, 0): one, (0, 1): -one, (0, -1): one}, {(0, 0): one})
    with pytest.raises(SingularYStep, match="singular Y-step"):
        y_step(yf, (0, 0, 1))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_y_from_evolved_t_satisfies_y_system(seed):
    rng = random.Random(seed)
    surf = InitialSurface.flat(square_sites(5), lambda i, j: Fraction(rng.randint(1, 9), rng.randint(1, 9)))
    f = TField(surf)
    ys = {}
    for k in range(-1, 3):
        for i in range(-2, 3):
            for j in range(-2, 3):
                if not f.in_parity((i, j, k)):
                    ys[(i, j, k)] = y_from_t(f, (i, j, k))
    yf = YField({p: v for p, v in ys.items() if p[2] in (0, 1)})
    for i in range(-1, 2):
        for j in range(-1, 2):
            for k in (0, 1):
                if f.in_parity((i, j, k)):
                    assert y_system_residual(ys, (i, j, k)) == 0
                    if k == 1:
                        assert y_step(yf, (i, j, 1)) == ys[(i, j, 2)]


# --- serialization ----------------------------------------------------------

def test_surface_json_roundtrip():
    surf = InitialSurface.flat(square_sites(1), lambda i, j: Fraction(i + 5, 3))
    assert InitialSurface.from_json(surf.to_json()) == surf
    sym = InitialSurface.flat(square_sites(1))
    data = sym.to_json()
    assert all(e["value"] == "sym" for e in data["entries"])
    assert InitialSurface.from_json(data) == sym
    assert symbol(0, 0) == x(0, 0)


def test_surface_validation():
    with pytest.raises(ValueError):
        InitialSurface({(0, 0): 0, (0, 1): 0}, {(0, 0): Fraction(1), (0, 1): Fraction(1)})
