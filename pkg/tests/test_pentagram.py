from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tsystem.pentagram import (
    DegenerateQuadruple,
    NonGenericPolygon,
    PQCoordinates,
    ProjectivePoint,
    TwistedPolygon,
    YSeed,
    conserved_quantities,
    corner_invariants,
    cross_ratio,
    glick_quiver,
    higher_map,
    iterate_map,
    kappa_params,
    mat_vec,
    mutate_y_seed,
    pentagram_map_geometric,
    pentagram_via_mutations,
    pq_from_corners,
    pq_invariants,
    random_pq,
    random_twisted_polygon,
)

F = Fraction


def pt(t):
    return ProjectivePoint(F(t), F(0), F(1))


INF = ProjectivePoint(1, 0, 0)


# --- parameters and cross-ratio ---------------------------------------------

def test_kappa_params():
    assert (kappa_params(3).r, kappa_params(3).rprime) == (0, 1)
    assert (kappa_params(4).r, kappa_params(4).rprime) == (1, 1)
    assert (kappa_params(5).r, kappa_params(5).rprime) == (1, 2)
    with pytest.raises(ValueError):
        kappa_params(2)


def test_cross_ratio_examples():
    assert cross_ratio(pt(0), pt(1), pt(2), pt(3)) == F(1, 4)
    assert cross_ratio(pt(0), INF, pt(1), pt(2)) == -1


def test_cross_ratio_degenerate():
    with pytest.raises(DegenerateQuadruple, match="degenerate quadruple"):
        cross_ratio(pt(1), pt(2), pt(1), pt(3))


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=20)


@settings(max_examples=100, deadline=None)
@given(st.lists(rationals, min_size=4, max_size=4, unique=True),
       st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_cross_ratio_projective_invariance(ts, g):
    a, b, c, d = ts
    want = (a - b) * (c - d) / ((a - c) * (b - d))
    pts = [pt(t) for t in ts]
    assert cross_ratio(*pts) == want
    m = [g[0:3], g[3:6], g[6:9]]
    if (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) == 0:
        return
    images = [mat_vec(m, p.coords) for p in pts]
    assert cross_ratio(*images) == want
    scaled = [tuple(F(k + 2) * x for x in p.coords) for k, p in enumerate(pts)]
    assert cross_ratio(*scaled) == want


# --- corner and p,q invariants ---------------------------------------------

def _affine(v):
    return (float(v[0]) / float(v[2]), float(v[1]) / float(v[2]))


def _meet_f(a, b, c, d):
    (x1, y1), (x2, y2), (x3, y3), (x4, y4) = a, b, c, d
    den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
    s = ((x1 - x3) * (y3 - y4) - (y1 - y3) * (x3 - x4)) / den
    return (x1 + s * (x2 - x1), y1 + s * (y2 - y1))


def _chi_f(a, b, c, d):
    k = 0 if abs(a[0] - d[0]) > abs(a[1] - d[1]) else 1
    ta, tb, tc, td = a[k], b[k], c[k], d[k]
    return (ta - tb) * (tc - td) / ((ta - tc) * (tb - td))


def float_corners(A: TwistedPolygon):
    v = lambda i: _affine(A.v(i))  # noqa: E731
    X, Y = [], []
    for i in range(A.n):
        back = (v(i - 2), v(i - 1))
        fwd = (v(i + 1), v(i + 2))
        far = _meet_f(*back, *fwd)
        X.append(_chi_f(v(i - 2), v(i - 1), _meet_f(*back, v(i), v(i + 1)), far))
        Y.append(_chi_f(far, _meet_f(v(i - 1), v(i), *fwd), v(i + 1), v(i + 2)))
    return X, Y


def test_corner_invariants_float_oracle():
    rng = random.Random(1)
    for _ in range(10):
        A = random_twisted_polygon(5, rng)
        try:
            fx, fy = float_corners(A)
        except ZeroDivisionError:
            continue
        X, Y = corner_invariants(A)
        for a, b in zip(X + Y, fx + fy):
            assert abs(float(a) - b) <= 1e-9 * max(1.0, abs(b))


def test_corner_invariants_projective_and_scale_invariant():
    rng = random.Random(2)
    A = random_twisted_polygon(6, rng)
    g = [[2, 1, 0], [0, 1, 3], [1, 0, 1]]
    assert corner_invariants(A.transformed(g)) == corner_invariants(A)
    assert corner_invariants(A.rescaled([1, 2, 3, F(1, 2), 5, 7])) == corner_invariants(A)


def test_pq_from_chi_matches_corners():
    rng = random.Random(3)
    for n in (5, 6, 8):
        A = random_twisted_polygon(n, rng)
        X, Y = corner_invariants(A)
        pq = pq_invariants(A, 3)
        assert pq == pq_from_corners(X, Y)
        assert pq.P(n + 2) == pq.P(2)


def test_non_generic_polygon():
    A = TwistedPolygon([(0, 0, 1), (1, 0, 1), (2, 0, 1), (0, 1, 1), (1, 3, 1)])
    with pytest.raises(NonGenericPolygon, match="non-generic polygon"):
        corner_invariants(A)


def test_polygon_json_roundtrip():
    A = random_twisted_polygon(5, random.Random(4))
    B = TwistedPolygon.from_json(A.to_json())
    assert B.same_projective(A)
    with pytest.raises(ValueError):
        TwistedPolygon([(0, 0, 1)] * 4)


# --- geometric map -----------------------------------------------------------

PENTAGON = [(2, 0, 1), (1, 2, 1), (-1, 1, 1), (-1, -1, 1), (1, -2, 1)]


def test_geometric_map_pentagon():
    A = TwistedPolygon(PENTAGON)
    B = pentagram_map_geometric(A)
    assert B.n == 5
    assert len({B.point(i) for i in range(5)}) == 5


def test_geometric_map_equivariance_and_monodromy():
    rng = random.Random(5)
    A = random_twisted_polygon(7, rng)
    g = [[1, 2, 0], [0, 3, 1], [1, 0, 2]]
    assert pentagram_map_geometric(A.transformed(g)).same_projective(pentagram_map_geometric(A).transformed(g))
    B = pentagram_map_geometric(A)
    for i in range(B.n):
        assert ProjectivePoint(B.v(i + B.n)) == ProjectivePoint(mat_vec(A.monodromy, B.v(i)))


def test_geometric_matches_algebraic():
    rng = random.Random(6)
    for n in (5, 7, 9):
        A = random_twisted_polygon(n, rng)
        assert pq_invariants(pentagram_map_geometric(A), 3) == higher_map(pq_invariants(A, 3))


# --- the map on p, q ---------------------------------------------------------

def test_constant_example():
    out = higher_map(PQCoordinates(3, [F(2)] * 5, [F(3)] * 5))
    assert out.p == [F(12)] * 5
    assert out.q == [F(1, 2)] * 5


def test_q_update_kappa3():
    pq = random_pq(6, 3, random.Random(7))
    out = higher_map(pq)
    assert all(out.Q(i) == 1 / pq.P(i + 1) for i in range(6))


@pytest.mark.parametrize("kappa", [3, 4, 5])
def test_inverse_composition(kappa):
    pq = random_pq(kappa + 4, kappa, random.Random(kappa))
    assert higher_map(higher_map(pq), "inverse") == pq
    assert higher_map(higher_map(pq, "inverse")) == pq


def test_unknown_direction():
    with pytest.raises(ValueError):
        higher_map(random_pq(5, 3, random.Random(0)), "sideways")


def test_conserved_examples():
    assert conserved_quantities(PQCoordinates(3, [1] * 5, [1] * 5)) == (1, 1)
    assert conserved_quantities(PQCoordinates(3, [1, 2, 3, 4, 5], [1] * 5))[0] == 120


@pytest.mark.parametrize("kappa", [3, 4, 5])
def test_conservation_on_polygons(kappa):
    rng = random.Random(10 + kappa)
    A = random_twisted_polygon(kappa + 4, rng, kappa=kappa)
    pq = pq_invariants(A, kappa)
    orbit = iterate_map(pq, 6)
    assert len({conserved_quantities(x) for x in orbit}) == 1


def test_generic_pq_outside_polygon_locus():
    # off the locus O*E = 1 the products are rescaled by the map: E' = 1/O
    pq = PQCoordinates(3, [F(2)] * 5, [F(3)] * 5)
    O, E = conserved_quantities(pq)
    O2, E2 = conserved_quantities(higher_map(pq))
    assert O * E != 1
    assert E2 == 1 / O and O2 == E * O * O


def test_pq_json():
    pq = random_pq(5, 4, random.Random(8))
    assert PQCoordinates.from_json(pq.to_json()) == pq
    with pytest.raises(ValueError):
        PQCoordinates(3, [1, 0, 1, 1, 1], [1] * 5)


# --- quiver and mutations ----------------------------------------------------

def test_glick_quiver_kappa3():
    n = 8
    B = glick_quiver(3, n)
    for i in range(n):
        q = n + i
        outs = {a for a in range(n) if B[q][a] > 0}
        ins = {a for a in range(n) if B[q][a] < 0}
        assert outs == {i, (i + 1) % n}
        assert ins == {(i - 1) % n, (i + 2) % n}
    assert B[0][n + 1] == 1  # c_{1,2}
    assert all(B[a][b] == -B[b][a] for a in range(2 * n) for b in range(2 * n))
    with pytest.raises(ValueError):
        glick_quiver(3, 3)


def test_mutation_example():
    s = YSeed([F(2), F(3)], [[0, 1], [-1, 0]])
    t = mutate_y_seed(s, 0)
    assert t.y == [F(1, 2), F(2)]
    assert t.B[0][1] == -1
    assert mutate_y_seed(t, 0) == s


def test_mutation_order_on_p_vertices():
    seed = YSeed.from_pq(random_pq(8, 3, random.Random(9)))
    a = mutate_y_seed(mutate_y_seed(seed, 0), 3)
    b = mutate_y_seed(mutate_y_seed(seed, 3), 0)
    assert a == b


@pytest.mark.parametrize("kappa,n", [(3, 8), (4, 7), (5, 9)])
def test_mutations_realize_the_map(kappa, n):
    pq = random_pq(n, kappa, random.Random(kappa * n))
    seed = YSeed.from_pq(pq)
    out = pentagram_via_mutations(seed, kappa)
    assert out.B == seed.B
    assert out.pq(kappa) == higher_map(pq)
    shuffled = list(range(n))
    random.Random(1).shuffle(shuffled)
    assert pentagram_via_mutations(seed, kappa, shuffled) == out


def test_mutations_constant_example():
    seed = YSeed.from_pq(PQCoordinates(3, [F(2)] * 8, [F(3)] * 8))
    out = pentagram_via_mutations(seed, 3).pq(3)
    assert out.p == [F(12)] * 8 and out.q == [F(1, 2)] * 8
