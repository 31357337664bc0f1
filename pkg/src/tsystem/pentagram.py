"""Twisted polygons, projective invariants and the (higher) pentagram map.

Indices of ``p``, ``q``, ``X``, ``Y`` run over ``0..n-1`` and are read mod n.
Vertices are stored as lifted 3-vectors; ``v(i + n) = M v(i)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import is_zero, parse_rational, format_rational, to_json_value, from_json_value

Vec = tuple[Fraction, Fraction, Fraction]
Matrix = tuple[Vec, Vec, Vec]

FORWARD = "forward"
INVERSE = "inverse"


class GeometryError(ValueError):
    pass


class DegenerateQuadruple(GeometryError):
    def __init__(self, msg: str = "degenerate quadruple"):
        super().__init__(msg)


class NotCollinear(GeometryError):
    def __init__(self, msg: str = "points are not collinear"):
        super().__init__(msg)


class NonGenericPolygon(GeometryError):
    def __init__(self, msg: str = "non-generic polygon"):
        super().__init__(msg)


class SingularConfiguration(ArithmeticError):
    def __init__(self, msg: str = "singular configuration"):
        super().__init__(msg)


# ---------------------------------------------------------------------------
# homogeneous coordinates
# ---------------------------------------------------------------------------

def _vec(v) -> Vec:
    if len(v) != 3:
        raise ValueError("homogeneous coordinates need three entries")
    return tuple(parse_rational(x) for x in v)  # type: ignore[return-value]


def cross(u: Sequence, v: Sequence) -> Vec:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def dot(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def det3(a: Sequence, b: Sequence, c: Sequence):
    return dot(a, cross(b, c))


def _is_null(v: Sequence) -> bool:
    return v[0] == 0 and v[1] == 0 and v[2] == 0


class ProjectivePoint:
    """A point of the projective plane; equal up to a nonzero scalar."""

    __slots__ = ("coords",)

    def __init__(self, x, y=None, z=None):
        v = _vec(x if y is None else (x, y, z))
        if _is_null(v):
            raise ValueError("homogeneous coordinates cannot all vanish")
        self.coords: Vec = v

    def canonical(self) -> Vec:
        lead = next(c for c in self.coords if c != 0)
        return tuple(c / lead for c in self.coords)  # type: ignore[return-value]

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return _is_null(cross(self.coords, other.coords))

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return "ProjectivePoint(%s)" % ", ".join(format_rational(c) for c in self.canonical())

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __len__(self):
        return 3


def _coords(p) -> Vec:
    return p.coords if isinstance(p, ProjectivePoint) else _vec(p)


def line_through(a, b) -> Vec:
    l = cross(_coords(a), _coords(b))
    if _is_null(l):
        raise NonGenericPolygon("coincident points do not span a line")
    return l


def meet(l1: Sequence, l2: Sequence) -> Vec:
    p = cross(l1, l2)
    if _is_null(p):
        raise NonGenericPolygon("coincident lines do not meet in a point")
    return p


def intersect(a, b, c, d) -> Vec:
    """Intersection of the line ``ab`` with the line ``cd``."""
    return meet(line_through(a, b), line_through(c, d))


def _line_coordinates(points: list[Vec]) -> list[tuple]:
    """Coordinates ``(u, w)`` of collinear points in a basis of their line."""
    e = points[0]
    f = next((p for p in points[1:] if not _is_null(cross(e, p))), None)
    if f is None:
        raise DegenerateQuadruple()
    ef = cross(e, f)
    k = next(t for t in range(3) if ef[t] != 0)
    out = []
    for p in points:
        if det3(e, f, p) != 0:
            raise NotCollinear()
        out.append((cross(p, f)[k] / ef[k], cross(e, p)[k] / ef[k]))
    return out


def _bracket(s, t):
    return s[0] * t[1] - s[1] * t[0]


def cross_ratio(a, b, c, d) -> Fraction:
    """``(a-b)(c-d) / ((a-c)(b-d))`` for four collinear points.

    Each difference is the 2x2 bracket of the points' coordinates on their
    line, so the value does not depend on the basis or on rescaling.
    """
    pa, pb, pc, pd = _line_coordinates([_coords(x) for x in (a, b, c, d)])
    den = _bracket(pa, pc) * _bracket(pb, pd)
    if den == 0:
        raise DegenerateQuadruple()
    return Fraction(_bracket(pa, pb) * _bracket(pc, pd)) / den


# ---------------------------------------------------------------------------
# 3x3 matrices
# ---------------------------------------------------------------------------

def _mat(m) -> Matrix:
    rows = tuple(_vec(r) for r in m)
    if len(rows) != 3:
        raise ValueError("monodromy must be 3x3")
    return rows  # type: ignore[return-value]


def mat_vec(m: Matrix, v: Sequence) -> Vec:
    return tuple(dot(row, v) for row in m)  # type: ignore[return-value]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(dot(r, c) for c in cols) for r in a)  # type: ignore[return-value]


def mat_det(m: Matrix):
    return det3(m[0], m[1], m[2])


def mat_inv(m: Matrix) -> Matrix:
    d = mat_det(m)
    if d == 0:
        raise ValueError("monodromy must be invertible")
    # rows of the inverse are the cross products of columns
    c0, c1, c2 = zip(*m)
    adj_rows = (cross(c1, c2), cross(c2, c0), cross(c0, c1))
    return tuple(tuple(Fraction(x) / d for x in r) for r in adj_rows)  # type: ignore[return-value]


IDENTITY: Matrix = tuple(tuple(Fraction(int(r == c)) for c in range(3)) for r in range(3))  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# twisted polygons
# ---------------------------------------------------------------------------

@dataclass
class TwistedPolygon:
    vertices: list
    monodromy: Matrix = IDENTITY
    _inv: Matrix | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = [_coords(v) for v in self.vertices]
        self.monodromy = _mat(self.monodromy)
        if len(self.vertices) < 5:
            raise ValueError("a twisted polygon needs n >= 5")
        if any(_is_null(v) for v in self.vertices):
            raise ValueError("homogeneous coordinates cannot all vanish")
        self._inv = mat_inv(self.monodromy)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def v(self, i: int) -> Vec:
        q, r = divmod(i, self.n)
        x = self.vertices[r]
        m = self.monodromy if q > 0 else self._inv
        for _ in range(abs(q)):
            x = mat_vec(m, x)
        return x

    def point(self, i: int) -> ProjectivePoint:
        return ProjectivePoint(self.v(i))

    def is_generic(self) -> bool:
        return all(det3(self.v(i), self.v(i + 1), self.v(i + 2)) != 0 for i in range(self.n))

    def transformed(self, g) -> "TwistedPolygon":
        """Image under the projective map ``g``; the monodromy is conjugated."""
        g = _mat(g)
        gi = mat_inv(g)
        return TwistedPolygon([mat_vec(g, v) for v in self.vertices],
                              mat_mul(mat_mul(g, self.monodromy), gi))

    def rescaled(self, scales: Sequence) -> "TwistedPolygon":
        return TwistedPolygon(
            [tuple(Fraction(s) * x for x in v) for s, v in zip(scales, self.vertices)],
            self.monodromy,
        )

    def same_projective(self, other: "TwistedPolygon") -> bool:
        if self.n != other.n:
            return False
        if any(not _is_null(cross(a, b)) for a, b in zip(self.vertices, other.vertices)):
            return False
        return projectively_equal_matrices(self.monodromy, other.monodromy)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [[format_rational(x) for x in v] for v in self.vertices],
            "monodromy": [[format_rational(x) for x in r] for r in self.monodromy],
        }

    @classmethod
    def from_json(cls, data) -> "TwistedPolygon":
        verts = data["vertices"]
        if "n" in data and int(data["n"]) != len(verts):
            raise ValueError("vertex count does not match n")
        return cls(verts, data.get("monodromy", IDENTITY))


def projectively_equal_matrices(a: Matrix, b: Matrix) -> bool:
    fa = [x for r in a for x in r]
    fb = [x for r in b for x in r]
    k = next(t for t in range(9) if fa[t] != 0)
    if fb[k] == 0:
        return False
    s = fb[k] / fa[k]
    return all(y == s * x for x, y in zip(fa, fb))


def _small_rational(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_monodromy(rng: random.Random, steps: int = 4, bound: int = 9) -> Matrix:
    """Random product of elementary rational matrices."""
    m = IDENTITY
    for _ in range(steps):
        e = [list(r) for r in IDENTITY]
        if rng.random() < 0.5:
            a, b = rng.sample(range(3), 2)
            e[a][b] = _small_rational(rng, bound)
        else:
            a = rng.randrange(3)
            s = Fraction(0)
            while s == 0:
                s = _small_rational(rng, bound)
            e[a][a] = s
        m = mat_mul(m, tuple(tuple(r) for r in e))  # type: ignore[arg-type]
    return m


def random_twisted_polygon(n: int, rng: random.Random, kappa: int = 3,
                           twisted: bool = True, bound: int = 9, tries: int = 200) -> TwistedPolygon:
    """Random twisted n-gon, resampled until every invariant is defined."""
    for _ in range(tries):
        verts = [(_small_rational(rng, bound), _small_rational(rng, bound), Fraction(1))
                 for _ in range(n)]
        mono = random_monodromy(rng, bound=bound) if twisted else IDENTITY
        try:
            poly = TwistedPolygon(verts, mono)
            if not poly.is_generic():
                continue
            pq_invariants(poly, kappa)
            if kappa == 3:
                corner_invariants(poly)
                pq_invariants(pentagram_map_geometric(poly), 3)
        except (GeometryError, ValueError, ZeroDivisionError):
            continue
        return poly
    raise RuntimeError("could not sample a generic polygon")


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KappaParams:
    r: int
    rprime: int


def kappa_params(kappa: int) -> KappaParams:
    if kappa < 3:
        raise ValueError("kappa must be at least 3")
    return KappaParams((kappa - 2) // 2, (kappa - 1) // 2)


def _generic(fn: Callable):
    def wrapped(A, *args, **kwargs):
        if not A.is_generic():
            raise NonGenericPolygon()
        try:
            return fn(A, *args, **kwargs)
        except (DegenerateQuadruple, NotCollinear, NonGenericPolygon) as exc:
            raise NonGenericPolygon() from exc
    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_generic
def corner_invariants(A: TwistedPolygon) -> tuple[list[Fraction], list[Fraction]]:
    v = A.v
    X, Y = [], []
    for i in range(A.n):
        l_back = line_through(v(i - 2), v(i - 1))
        l_fwd = line_through(v(i + 1), v(i + 2))
        X.append(cross_ratio(v(i - 2), v(i - 1),
                             meet(l_back, line_through(v(i), v(i + 1))),
                             meet(l_back, l_fwd)))
        Y.append(cross_ratio(meet(l_back, l_fwd),
                             meet(line_through(v(i - 1), v(i)), l_fwd),
                             v(i + 1), v(i + 2)))
    return X, Y


@dataclass
class PQCoordinates:
    kappa: int
    p: list
    q: list

    def __post_init__(self):
        kappa_params(self.kappa)
        if len(self.p) != len(self.q):
            raise ValueError("p and q must have the same length")
        if any(is_zero(x) for x in list(self.p) + list(self.q)):
            raise ValueError("p and q entries must be nonzero")
        self.p = list(self.p)
        self.q = list(self.q)

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def params(self) -> KappaParams:
        return kappa_params(self.kappa)

    def P(self, i: int):
        return self.p[i % self.n]

    def Q(self, i: int):
        return self.q[i % self.n]

    def swapped(self) -> "PQCoordinates":
        return PQCoordinates(self.kappa, list(self.q), list(self.p))

    def __eq__(self, other):
        if not isinstance(other, PQCoordinates):
            return NotImplemented
        return self.kappa == other.kappa and self.p == other.p and self.q == other.q

    def to_json(self) -> dict:
        return {"kappa": self.kappa, "p": [to_json_value(x) for x in self.p],
                "q": [to_json_value(x) for x in self.q]}

    @classmethod
    def from_json(cls, data) -> "PQCoordinates":
        return cls(int(data["kappa"]), [from_json_value(x) for x in data["p"]],
                   [from_json_value(x) for x in data["q"]])


def random_pq(n: int, kappa: int, rng: random.Random, bound: int = 9) -> PQCoordinates:
    """Positive random (p, q); positivity keeps every factor of the map away from zero."""
    draw = lambda: Fraction(rng.randint(1, bound), rng.randint(1, bound))
    return PQCoordinates(kappa, [draw() for _ in range(n)], [draw() for _ in range(n)])


@_generic
def pq_invariants(A: TwistedPolygon, kappa: int) -> PQCoordinates:
    kp = kappa_params(kappa)
    r, rp = kp.r, kp.rprime
    v = A.v
    p, q = [], []
    for i in range(A.n):
        L = line_through(v(i - rp), v(i + r + 1))
        b = meet(line_through(v(i - rp - 1), v(i + r)), L)
        c = meet(L, line_through(v(i - rp + 1), v(i + r + 2)))
        chi = cross_ratio(v(i - rp), b, c, v(i + r + 1))
        if chi == 0:
            raise DegenerateQuadruple()
        p.append(-1 / chi)
        side = line_through(v(i), v(i + 1))
        q.append(-cross_ratio(meet(line_through(v(i - kappa + 1), v(i - kappa + 2)), side),
                              v(i), v(i + 1),
                              meet(side, line_through(v(i + kappa - 1), v(i + kappa)))))
    return PQCoordinates(kappa, p, q)


def pq_from_corners(X: Sequence, Y: Sequence) -> PQCoordinates:
    """``p = -1/(X Y)`` and ``q = -Y X[+1]``, the three-diagonal case."""
    n = len(X)
    p = [-1 / (X[i] * Y[i]) for i in range(n)]
    q = [-Y[i] * X[(i + 1) % n] for i in range(n)]
    return PQCoordinates(3, p, q)


@_generic
def pentagram_map_geometric(A: TwistedPolygon) -> TwistedPolygon:
    """New vertex ``i`` is the meet of the diagonals ``v[i-1]v[i+1]`` and ``v[i]v[i+2]``."""
    v = A.v
    verts = [intersect(v(i - 1), v(i + 1), v(i), v(i + 2)) for i in range(A.n)]
    return TwistedPolygon(verts, A.monodromy)


# ---------------------------------------------------------------------------
# the map on (p, q)
# ---------------------------------------------------------------------------

def _one_plus(x):
    s = 1 + x
    if is_zero(s):
        raise SingularConfiguration()
    return s


def _inv(x):
    if is_zero(x):
        raise SingularConfiguration()
    return 1 / x


def _forward(pq: PQCoordinates) -> PQCoordinates:
    r, rp = pq.params.r, pq.params.rprime
    P, Q = pq.P, pq.Q
    q_new = [_inv(P(i + rp - r)) for i in range(pq.n)]
    p_new = [
        Q(i) * _one_plus(P(i - r)) * _one_plus(P(i + rp))
        / (_one_plus(_inv(P(i - r - 1))) * _one_plus(_inv(P(i + rp + 1))))
        for i in range(pq.n)
    ]
    return PQCoordinates(pq.kappa, p_new, q_new)


def footnote_map(pq: PQCoordinates) -> PQCoordinates:
    """The companion transformation with the roles of ``r`` and ``r'`` exchanged.

    It inverts the forward map only after interchanging p and q on both
    sides: ``forward^-1 = swap . footnote_map . swap``.
    """
    r, rp = pq.params.r, pq.params.rprime
    P, Q = pq.P, pq.Q
    q_new = [_inv(P(i + r - rp)) for i in range(pq.n)]
    p_new = [
        Q(i) * _one_plus(P(i - rp - 1)) * _one_plus(P(i + r + 1))
        / (_one_plus(_inv(P(i - rp))) * _one_plus(_inv(P(i + r))))
        for i in range(pq.n)
    ]
    return PQCoordinates(pq.kappa, p_new, q_new)


def higher_map(pq: PQCoordinates, direction: str = FORWARD) -> PQCoordinates:
    if direction == FORWARD:
        return _forward(pq)
    if direction == INVERSE:
        return footnote_map(pq.swapped()).swapped()
    raise ValueError(f"unknown direction {direction!r}")


def iterate_map(pq: PQCoordinates, steps: int, direction: str = FORWARD) -> list[PQCoordinates]:
    out = [pq]
    for _ in range(steps):
        out.append(higher_map(out[-1], direction))
    return out


def conserved_quantities(pq: PQCoordinates) -> tuple:
    O = 1
    E = 1
    for x in pq.p:
        O = O * x
    for x in pq.q:
        E = E * x
    return O, E


# ---------------------------------------------------------------------------
# Y-seeds and the Glick quiver
# ---------------------------------------------------------------------------

@dataclass
class YSeed:
    y: list
    B: list[list[int]]

    def __post_init__(self):
        m = len(self.B)
        if len(self.y) != m or any(len(row) != m for row in self.B):
            raise ValueError("seed dimensions disagree")
        if any(self.B[a][b] != -self.B[b][a] for a in range(m) for b in range(m)):
            raise ValueError("exchange matrix must be skew-symmetric")

    @property
    def n(self) -> int:
        return len(self.y) // 2

    def pq(self, kappa: int) -> PQCoordinates:
        n = self.n
        return PQCoordinates(kappa, self.y[:n], self.y[n:])

    @classmethod
    def from_pq(cls, pq: PQCoordinates) -> "YSeed":
        return cls(list(pq.p) + list(pq.q), glick_quiver(pq.kappa, pq.n))

    def __eq__(self, other):
        if not isinstance(other, YSeed):
            return NotImplemented
        return self.B == other.B and self.y == other.y


def glick_quiver(kappa: int, n: int) -> list[list[int]]:
    """Exchange matrix ``[[0, C], [-C^T, 0]]`` with p-vertices first."""
    if n <= kappa:
        raise ValueError("need n > kappa")
    kp = kappa_params(kappa)
    r, rp = kp.r, kp.rprime
    C = [[0] * n for _ in range(n)]
    for j in range(n):
        C[(j - r - 1) % n][j] += 1
        C[(j - r) % n][j] -= 1
        C[(j + rp) % n][j] -= 1
        C[(j + rp + 1) % n][j] += 1
    B = [[0] * (2 * n) for _ in range(2 * n)]
    for a in range(n):
        for b in range(n):
            B[a][n + b] = C[a][b]
            B[n + b][a] = -C[a][b]
    return B


def mutate_y_seed(seed: YSeed, k: int) -> YSeed:
    yk = seed.y[k]
    if is_zero(yk) or is_zero(yk + 1):
        raise SingularConfiguration("singular y value")
    m = len(seed.y)
    B = seed.B
    y = []
    for j in range(m):
        if j == k:
            y.append(1 / yk)
            continue
        b = B[k][j]
        val = seed.y[j]
        if b > 0:
            val = val * yk ** b
        if b != 0:
            val = val * (1 + yk) ** (-b) if b < 0 else val / (1 + yk) ** b
        y.append(val)
    nb = [[0] * m for _ in range(m)]
    for a in range(m):
        for c in range(m):
            if a == k or c == k:
                nb[a][c] = -B[a][c]
            else:
                prod = B[a][k] * B[k][c]
                sgn = (B[a][k] > 0) - (B[a][k] < 0)
                nb[a][c] = B[a][c] + sgn * max(prod, 0)
    return YSeed(y, nb)


def pentagram_via_mutations(seed: YSeed, kappa: int, order: Sequence[int] | None = None) -> YSeed:
    """Mutate at every p-vertex, then relabel ``p_{i+r'-r} -> q_i``, ``q_i -> p_i``."""
    n = seed.n
    kp = kappa_params(kappa)
    order = list(range(n)) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the p-vertices")
    s = seed
    for k in order:
        s = mutate_y_seed(s, k)
    shift = kp.rprime - kp.r
    perm = [0] * (2 * n)  # old label -> new label
    for i in range(n):
        perm[i] = n + (i - shift) % n
        perm[n + i] = i
    y = [None] * (2 * n)
    B = [[0] * (2 * n) for _ in range(2 * n)]
    for a in range(2 * n):
        y[perm[a]] = s.y[a]
        for c in range(2 * n):
            B[perm[a]][perm[c]] = s.B[a][c]
    return YSeed(y, B)
