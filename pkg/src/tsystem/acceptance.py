"""The twelve acceptance checks, each returning a :class:`Report`.

Shared by ``tests/test_acceptance.py`` and the ``verify-all`` command.
Every check is exact; the ones with a time budget record the elapsed
seconds in ``info`` and fail when over budget.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Callable

from . import boundary, condensation, network, pentagram, torus
from .algebra import laurent_is_positive
from .lattice import (
    EVEN,
    ODD,
    InitialSurface,
    TField,
    WindowExceeded,
    evolve_to,
    flat_height,
    square_sites,
)
from .report import Report


def _timed(rep: Report, start: float, budget: float | None) -> Report:
    elapsed = time.perf_counter() - start
    rep.info["seconds"] = round(elapsed, 3)
    if budget is not None:
        rep.add(f"runtime <= {budget:g} s", elapsed <= budget, "desk-scale budget",
                counterexample={"seconds": round(elapsed, 3)})
    return rep


def _rand_q(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(1, bound), rng.randint(1, bound))


# 1 -------------------------------------------------------------------------

def laurent_positivity(seed: int = 0) -> Report:
    start = time.perf_counter()
    rep = Report("laurent positivity")
    field = TField(InitialSurface.flat(square_sites(4)))
    values = {}
    for k in range(-4, 5):
        for i, j in square_sites(4):
            if field.in_parity((i, j, k)):
                try:
                    values[(i, j, k)] = evolve_to(field, (i, j, k))
                except WindowExceeded:
                    continue
    bad = next((p for p, v in values.items() if not laurent_is_positive(v)), None)
    rep.add("every value on |i|,|j| <= 4, |k| <= 4 is a positive Laurent polynomial",
            bad is None and bool(values), "Laurent positivity", counterexample=bad)
    rep.info["values"] = len(values)
    rep.add("level k = 4 is reached", any(k == 4 for _, _, k in values), "Laurent positivity")
    return _timed(rep, start, 60)


# 2 -------------------------------------------------------------------------

def _diamond_centres(k: int) -> list[tuple[int, int]]:
    return [(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1) if (i + j + k) % 2 == 1]


def network_oracle(seed: int = 0, surfaces: int = 20) -> Report:
    rng = random.Random(seed)
    rep = Report("network oracle")
    sites = square_sites(5)
    bad = None
    count = 0
    for _ in range(surfaces):
        surf = InitialSurface.flat(sites, {s: _rand_q(rng) for s in sites})
        field = TField(surf)
        for k in range(1, 5):
            for c in _diamond_centres(k):
                count += 1
                d = network.build_diamond(surf, c[0], c[1], k)
                if network.t_via_network(d) != evolve_to(field, (c[0], c[1], k)):
                    bad = bad or {"centre": list(c), "k": k}
    rep.add("network formula equals evolution, rational, k <= 4", bad is None,
            "network-matrix solution", counterexample=bad, detail={"points": count})

    sym = InitialSurface.flat(sites)
    field = TField(sym)
    bad = None
    for k in range(1, 4):
        for c in _diamond_centres(k):
            d = network.build_diamond(sym, c[0], c[1], k)
            if network.t_via_network(d) != evolve_to(field, (c[0], c[1], k)):
                bad = bad or {"centre": list(c), "k": k}
    rep.add("network formula equals evolution, symbolic, k <= 3", bad is None,
            "network-matrix solution", counterexample=bad)

    bad = None
    for t in range(surfaces):
        surf = InitialSurface.flat(sites, {s: _rand_q(rng) for s in sites}) if t else sym
        for k in range(1, 4):
            for c in _diamond_centres(k)[:2]:
                d = network.build_diamond(surf, c[0], c[1], k)
                if network.lgv_bruteforce(d) != condensation.bareiss_determinant(network.path_matrix(d)):
                    bad = bad or {"surface": t, "centre": list(c), "k": k}
    rep.add("disjoint-path enumeration equals det of the path matrix, k <= 3", bad is None,
            "LGV lemma", counterexample=bad)
    return rep


# 3 -------------------------------------------------------------------------

def _zero_pivot_matrix(rng: random.Random, n: int) -> list[list[int]]:
    m = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
    r, c = rng.randint(1, n - 2), rng.randint(1, n - 2)
    m[r][c] = 0
    return m


def desnanot_jacobi(seed: int = 0, n_identity: int = 1000, n_dodgson: int = 500) -> Report:
    start = time.perf_counter()
    rng = random.Random(seed)
    rep = Report("Desnanot-Jacobi")
    bad = None
    for _ in range(n_identity):
        n = rng.randint(3, 6)
        m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        lhs, rhs = condensation.desnanot_sides(m)
        if lhs != rhs:
            bad = bad or m
    rep.add(f"identity on {n_identity} random integer matrices of size 3..6", bad is None,
            "Desnanot-Jacobi identity", counterexample=bad)
    bad = None
    fallback = 0
    for t in range(n_dodgson):
        n = rng.randint(3, 6)
        if t % 3 == 0:
            m = _zero_pivot_matrix(rng, n)
        else:
            m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        res = condensation.condense(m)
        fallback += res.method != "condensation"
        if res.determinant != condensation.laplace_determinant(m):
            bad = bad or m
    rep.add(f"condensation equals Laplace expansion on {n_dodgson} matrices", bad is None,
            "Dodgson condensation", counterexample=bad, detail={"zero_pivot_fallbacks": fallback})
    rep.add("zero interior pivots were exercised", fallback > 0, "Dodgson condensation")
    return _timed(rep, start, 30)


# 4 -------------------------------------------------------------------------

def polygon_pq(n: int, kappa: int, rng: random.Random, steps: int = 0) -> pentagram.PQCoordinates:
    """(p, q) of a random twisted polygon whose first ``steps`` images are all defined."""
    while True:
        pq = pentagram.pq_invariants(pentagram.random_twisted_polygon(n, rng, kappa=kappa), kappa)
        try:
            pentagram.iterate_map(pq, steps)
        except pentagram.SingularConfiguration:
            continue
        return pq


def conservation(seed: int = 0, instances: int = 50, iterations: int = 20) -> Report:
    rng = random.Random(seed)
    rep = Report("conservation")
    bad = None
    for t in range(instances):
        n = rng.randint(5, 12)
        kappa = rng.randint(3, 5)
        pq = polygon_pq(n, kappa, rng, iterations)
        ref = pentagram.conserved_quantities(pq)
        for step, cur in enumerate(pentagram.iterate_map(pq, iterations)):
            if pentagram.conserved_quantities(cur) != ref:
                bad = bad or {"instance": t, "n": n, "kappa": kappa, "iteration": step}
                break
    rep.add(f"O_n and E_n fixed over {iterations} iterations, {instances} instances",
            bad is None, "conserved quantities", counterexample=bad)
    return rep


# 5 -------------------------------------------------------------------------

def geometric_vs_algebraic(seed: int = 0, instances: int = 50) -> Report:
    rng = random.Random(seed)
    rep = Report("geometric map vs (p,q) map")
    bad = None
    for t in range(instances):
        n = rng.randint(5, 9)
        A = pentagram.random_twisted_polygon(n, rng)
        want = pentagram.higher_map(pentagram.pq_invariants(A, 3))
        got = pentagram.pq_invariants(pentagram.pentagram_map_geometric(A), 3)
        if got != want:
            bad = bad or {"instance": t, "polygon": A.to_json()}
    rep.add("pq of the geometric image equals the forward map of pq", bad is None,
            "pentagram map in (p,q) coordinates", counterexample=bad)
    return rep


# 6 -------------------------------------------------------------------------

def quiver_realization(seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = Report("quiver realization")
    b_bad = y_bad = order_bad = None
    for kappa in (3, 4, 5):
        for n in range(6, 11):
            pq = pentagram.random_pq(n, kappa, rng)
            seed0 = pentagram.YSeed.from_pq(pq)
            out = pentagram.pentagram_via_mutations(seed0, kappa)
            want = pentagram.higher_map(pq)
            if out.B != seed0.B:
                b_bad = b_bad or [kappa, n]
            if out.y != list(want.p) + list(want.q):
                y_bad = y_bad or [kappa, n]
            order = list(range(n))
            rng.shuffle(order)
            if pentagram.pentagram_via_mutations(seed0, kappa, order) != out:
                order_bad = order_bad or {"kappa": kappa, "n": n, "order": order}
    rep.add("mutations at all p-vertices plus relabelling fix B", b_bad is None,
            "generalized Glick quiver", counterexample=b_bad)
    rep.add("mutations reproduce the forward map on y-values", y_bad is None,
            "generalized Glick quiver", counterexample=y_bad)
    rep.add("p-vertex mutation order is immaterial", order_bad is None,
            "bipartite quiver", counterexample=order_bad)
    return rep


# 7 -------------------------------------------------------------------------

def torus_periodicity(seed: int = 0, levels: int = 10) -> Report:
    rng = random.Random(seed)
    rep = Report("torus double periodicity")
    for kappa, n in ((3, 5), (3, 7), (4, 6)):
        sub = torus.check_double_periodicity(pentagram.random_pq(n, kappa, rng), levels)
        rep.add(f"kappa={kappa}, n={n}: {sub.summary()}", sub.passed,
                "double periodicity of Y", counterexample=[r.to_json() for r in sub.failures()][:3])
    return rep


# 8 -------------------------------------------------------------------------

def unfolding(seed: int = 0, instances: int = 10, k_max: int = 6) -> Report:
    rng = random.Random(seed)
    rep = Report("unfolding")
    for t in range(instances):
        q = torus.random_quasi_surface(3, 5, rng)
        sub = torus.verify_unfolding(q, k_max)
        for r in sub.records:
            if r.status == "info":
                continue
            rep.add(f"instance {t}: {r.claim}", r.status == "pass", r.paper_ref,
                    counterexample=r.counterexample)
    return rep


# 9 -------------------------------------------------------------------------

def zamolodchikov(seed: int = 0, tubes: int = 5) -> Report:
    start = time.perf_counter()
    rng = random.Random(seed)
    rep = Report("Zamolodchikov periodicity")
    for d in range(1, 4):
        for ell in range(1, 5):
            for t in range(tubes):
                sub = boundary.check_zamolodchikov(d, ell, boundary.random_tube(d, ell, rng))
                rep.add(f"d={d}, l={ell}, tube {t}", sub.passed, "periodicity",
                        counterexample=[r.to_json() for r in sub.failures()][:2])
    return _timed(rep, start, 120)


# 10 ------------------------------------------------------------------------

def wall_consequences(seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = Report("wall consequences")
    window = {"k": range(-4, 5)}
    for d in range(1, 4):
        for parity in (EVEN, ODD):
            field = boundary.walled_strip(d, parity=parity, rng=rng)
            for sub in (boundary.verify_wall_zeros(d, field, window),
                        boundary.verify_mirror(d, field, {"j": range(1, 4), "k": range(-4, 5)})):
                rep.add(f"d={d}, {parity}: {sub.summary()}", sub.passed, "zeros and mirror",
                        counterexample=[r.to_json() for r in sub.failures()][:2])
    return rep


# 11 ------------------------------------------------------------------------

def recursion_coefficients(seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = Report("recursion coefficients")
    for d in range(1, 4):
        field = boundary.walled_strip(d, rng=rng)
        want = 1 if field.parity == ODD else 0
        sums = [s for s in range(2 * d + 6, 2 * d + 12) if (1 + s - d) % 2 == want]
        bad = None
        checked = 0
        for s in sums:
            for direction, anchor in ((condensation.SUM, (d + 2, s - d - 2)),
                                      (condensation.DIFFERENCE, (d + 2, d + 2 - s))):
                w = condensation.build_window_matrix(field, d + 2, (anchor[0], anchor[1] + 1))
                a = condensation.coefficients_from_window(w, direction)
                res = condensation.window_residuals(w, a, direction)
                m = w.entries if direction == condensation.SUM else [list(c) for c in zip(*w.entries)]
                checked += 1
                if any(r != 0 for r in res) or condensation.nullspace_oracle(m) != a:
                    bad = bad or {"d": d, "anchor": list(anchor), "direction": direction}
        rep.add(f"d={d}: kernel vectors annihilate every row and match elimination",
                bad is None and checked > 0, "singular windows", counterexample=bad,
                detail={"windows": checked})
        sub = boundary.verify_walled_coefficients(field, sums, n_anchors=3, pinned=2)
        rep.add(f"d={d}: independence over 3 anchors and c_i = T[d+1-i,1,.]",
                sub.passed, "conserved coefficients",
                counterexample=[r.to_json() for r in sub.failures()][:2])
    for d in (1, 2):
        for ell in range(1, 5):
            tube = boundary.random_tube(d, ell, rng)
            p = ell + d + 2
            sub = boundary.verify_two_wall_lift(tube, range(0, 2 * p))
            rep.add(f"d={d}, l={ell}: coefficient period p and V_(a+p) = (-1)^d V_a",
                    sub.passed, "two walls", counterexample=[r.to_json() for r in sub.failures()][:2])
    return rep


# 12 ------------------------------------------------------------------------

def reversibility(seed: int = 0, radius: int = 6, lift: int = 2) -> Report:
    rng = random.Random(seed)
    rep = Report("reversibility")
    cases = [
        ("rational odd", InitialSurface.flat(square_sites(radius), lambda i, j: _rand_q(rng), ODD)),
        ("rational even", InitialSurface.flat(square_sites(radius), lambda i, j: _rand_q(rng), EVEN)),
        ("symbolic odd", InitialSurface.flat(square_sites(4), "sym", ODD)),
    ]
    for name, surf in cases:
        up = TField(surf)
        parity = surf.parity
        r = max(abs(i) for i, _ in surf.sites())
        inner = [(i, j) for i, j in surf.sites() if max(abs(i), abs(j)) <= r - lift]
        heights = {s: flat_height(*s, parity) + lift for s in inner}
        raised = InitialSurface(heights, {s: evolve_to(up, (s[0], s[1], h)) for s, h in heights.items()})
        down = TField(raised)
        back = [s for s in inner if max(abs(s[0]), abs(s[1])) <= r - 2 * lift]
        bad = None
        for i, j in back:
            k = flat_height(i, j, parity)
            if evolve_to(down, (i, j, k)) != surf.value(i, j):
                bad = bad or [i, j, k]
        rep.add(f"{name}: up {lift} levels then down reproduces the surface",
                bad is None and bool(back), "invertibility of the octahedron step",
                counterexample=bad, detail={"sites": len(back)})
    return rep


CRITERIA: list[tuple[str, Callable[..., Report]]] = [
    ("laurent positivity", laurent_positivity),
    ("network oracle", network_oracle),
    ("Desnanot-Jacobi", desnanot_jacobi),
    ("conservation", conservation),
    ("geometric vs algebraic", geometric_vs_algebraic),
    ("quiver realization", quiver_realization),
    ("torus double periodicity", torus_periodicity),
    ("unfolding", unfolding),
    ("Zamolodchikov", zamolodchikov),
    ("wall consequences", wall_consequences),
    ("recursion coefficients", recursion_coefficients),
    ("reversibility", reversibility),
]


def run_all(seed: int = 0) -> list[tuple[int, str, Report]]:
    return [(n, name, fn(seed)) for n, (name, fn) in enumerate(CRITERIA, start=1)]
