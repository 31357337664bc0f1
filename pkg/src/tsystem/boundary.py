"""The A_d strip, walls of ones, and the two-wall tube.

Boundary rows are synthesized by a resolver and never stored:

* ``T[0,j,k] = T[d+1,j,k] = 1`` and hence ``T[-1,j,k] = T[d+2,j,k] = 0``;
* a wall ``T[i,0,k] = 1`` and optionally a second wall ``T[i,l+1,k] = 1``.

Values beyond a wall (``j < 0``) cannot be reached by evolution in ``k``.
Two independent routes reach them here:

* evolution in the ``j`` direction, which determines the first rows of
  zeros and stops at a ``0/0``;
* the linear recursion satisfied by ``x[j,k] = T[1,j,k]``, whose
  coefficients are read from windows lying entirely inside the strip;
  ``T[i]`` for ``i >= 2`` is then a window determinant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .algebra import from_json_value, is_zero, ring_one, ring_zero, to_json_value
from .condensation import (
    SUM,
    LinearExtension,
    RecursionCoefficients,
    build_window_matrix,
    coefficients_from_window,
    verify_coefficient_identity,
    verify_direction_independence,
    verify_lift_recursion,
)
from .lattice import EVEN, ODD, InitialSurface, TField, WindowExceeded, evolve_to, flat_height
from .report import Report


@dataclass(frozen=True)
class StripSpec:
    d: int
    wall_at_zero: bool = False
    second_wall: Optional[int] = None  # ell: wall at j = ell + 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("rank d must be positive")
        if self.second_wall is not None and self.second_wall < 1:
            raise ValueError("second wall needs ell >= 1")

    def resolver(self, kind: str = "rational"):
        one, zero = ring_one(kind), ring_zero(kind)
        d, wall, ell = self.d, self.wall_at_zero, self.second_wall

        def resolve(p):
            i, j, _ = p
            if i == 0 or i == d + 1:
                return one
            if i == -1 or i == d + 2:
                return zero
            if 1 <= i <= d:
                if wall and j == 0:
                    return one
                if ell is not None and j == ell + 1:
                    return one
            return None

        return resolve


class TubeField(TField):
    """A T-field whose resolver consults a :class:`StripSpec` first."""

    def __init__(self, spec: StripSpec, surface: InitialSurface):
        for (i, j) in surface.sites():
            if not 1 <= i <= spec.d:
                raise ValueError("strip data must satisfy 1 <= i <= d")
            if spec.wall_at_zero and j <= 0:
                raise ValueError("data must lie on the j >= 1 side of the wall")
            if spec.second_wall is not None and j > spec.second_wall:
                raise ValueError("data must lie between the walls")
        super().__init__(surface)
        self.spec = spec
        self.boundary = spec.resolver(self.kind)

    @property
    def d(self) -> int:
        return self.spec.d


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def random_positive(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(1, bound), rng.randint(1, bound))


def strip_surface(d: int, j_values: Iterable[int], values=None, parity: str = EVEN,
                  rng: random.Random | None = None) -> InitialSurface:
    """Flat data on ``1 <= i <= d`` and the given ``j``.

    ``values`` may be a mapping, a callable ``(i, j) -> value`` or ``None``
    (random positive rationals from ``rng``).
    """
    sites = [(i, j) for i in range(1, d + 1) for j in j_values]
    if values is None:
        rng = rng or random.Random(0)
        vals = {s: random_positive(rng) for s in sites}
    elif callable(values):
        vals = {s: values(*s) for s in sites}
    else:
        vals = {s: values[s] for s in sites}
    vals = {s: Fraction(v) if isinstance(v, int) else v for s, v in vals.items()}
    heights = {s: flat_height(*s, parity) for s in sites}
    return InitialSurface(heights, vals)


def evolve_strip(d: int, data, p):
    """``T`` at ``p`` for the A_d strip; ``data`` is a surface or a :class:`TubeField`."""
    field = data if isinstance(data, TubeField) else TubeField(StripSpec(d), data)
    if field.d != d:
        raise ValueError("rank mismatch")
    return evolve_to(field, p)


def walled_strip(d: int, j_max: int = 40, values=None, parity: str = EVEN,
                 rng: random.Random | None = None) -> TubeField:
    """Strip with a wall at ``j = 0`` and data on ``1 <= j <= j_max``."""
    surf = strip_surface(d, range(1, j_max + 1), values, parity, rng)
    return TubeField(StripSpec(d, wall_at_zero=True), surf)


def evolve_tube(d: int, ell: int, init: Sequence[Sequence], k_range: Iterable[int] = ()) -> TubeField:
    """Tube with walls at ``j = 0, l+1``; ``init[i-1][j-1]`` sits at ``(i, j, (i+j) mod 2)``."""
    if len(init) != d or any(len(row) != ell for row in init):
        raise ValueError("init must be a d x l grid")
    vals = {}
    for i in range(1, d + 1):
        for j in range(1, ell + 1):
            v = init[i - 1][j - 1]
            v = Fraction(v) if isinstance(v, int) else v
            if is_zero(v):
                from .lattice import DegenerateData
                raise DegenerateData()
            vals[(i, j)] = v
    surf = strip_surface(d, range(1, ell + 1), vals, EVEN)
    field = TubeField(StripSpec(d, wall_at_zero=True, second_wall=ell), surf)
    for k in k_range:
        for i in range(1, d + 1):
            for j in range(1, ell + 1):
                if (i + j + k) % 2 == 0:
                    evolve_to(field, (i, j, k))
    return field


def random_tube(d: int, ell: int, rng: random.Random, k_range: Iterable[int] = ()) -> TubeField:
    grid = [[random_positive(rng) for _ in range(ell)] for _ in range(d)]
    return evolve_tube(d, ell, grid, k_range)


def tube_from_json(data: dict, k_range: Iterable[int] = ()) -> TubeField:
    d, ell = int(data["d"]), int(data["ell"])
    grid = [[from_json_value(v) for v in row] for row in data["grid"]]
    return evolve_tube(d, ell, grid, k_range)


# ---------------------------------------------------------------------------
# evolution in the j direction
# ---------------------------------------------------------------------------

class Undetermined(Exception):
    """Raised for a ``0/0`` in the j-direction evolution."""


class InconsistentWall(Exception):
    """Raised for ``c/0`` with ``c != 0``: no solution extends across the wall."""


class JEvolution:
    """Values of a walled field beyond its walls, by evolving in ``j``.

    Backward:  T[i,j-1,k] = (T[i,j,k+1] T[i,j,k-1] - T[i+1,j,k] T[i-1,j,k]) / T[i,j+1,k]
    Forward:   T[i,j+1,k] = (T[i,j,k+1] T[i,j,k-1] - T[i+1,j,k] T[i-1,j,k]) / T[i,j-1,k]
    """

    def __init__(self, field: TubeField):
        if not field.spec.wall_at_zero:
            raise ValueError("j-direction evolution starts from a wall")
        self.field = field
        self.lo = 0
        self.hi = field.spec.second_wall + 1 if field.spec.second_wall is not None else None
        self.memo: dict = {}

    def __call__(self, i: int, j: int, k: int):
        f = self.field
        b = f.boundary((i, j, k))
        if b is not None:
            return b
        if j >= self.lo and (self.hi is None or j <= self.hi):
            return evolve_to(f, (i, j, k))
        key = (i, j, k)
        if key in self.memo:
            v = self.memo[key]
            if isinstance(v, Exception):
                raise v
            return v
        try:
            s = 1 if j < self.lo else -1  # step towards the known region
            jn = j + s
            num = self(i, jn, k + 1) * self(i, jn, k - 1) - self(i + 1, jn, k) * self(i - 1, jn, k)
            den = self(i, jn + s, k)
            if is_zero(den):
                if is_zero(num):
                    raise Undetermined(key)
                raise InconsistentWall(key)
            v = num / den
        except (Undetermined, InconsistentWall) as exc:
            self.memo[key] = exc
            raise
        self.memo[key] = v
        return v

    def try_value(self, i: int, j: int, k: int):
        try:
            return self(i, j, k)
        except Undetermined:
            return None


# ---------------------------------------------------------------------------
# recursion-based extension beyond walls
# ---------------------------------------------------------------------------

class WallExtension:
    """``x = T[1,.,.]`` of a walled field on all of ``Z^2``.

    Known values: the field itself (``j >= 0``, or ``0 <= j <= l+1`` for a
    tube) plus whatever the j-direction evolution determines when
    ``use_j_evolution`` is set.  Sum-direction coefficients are read from
    ``(d+2)``-windows centred at ``coeff_j``.
    """

    def __init__(self, field: TubeField, use_j_evolution: bool = False,
                 coeff_j: int | None = None):
        self.field = field
        d = self.d = field.d
        spec = field.spec
        self.jev = JEvolution(field)
        lo, hi = 0, (spec.second_wall + 1 if spec.second_wall is not None else None)
        if use_j_evolution:
            lo = self._extent(-1, d + 1)
            if hi is not None:
                hi = hi + self._extent(+1, d + 1)
        self.lo, self.hi = lo, hi
        if coeff_j is None:
            coeff_j = lo + d + 1 if use_j_evolution else d + 2
        if coeff_j - d - 1 < lo or (hi is not None and coeff_j + d + 1 > hi):
            raise ValueError("no coefficient window fits inside the determined region")
        self.coeff_j = coeff_j
        self._coeffs: dict[int, list] = {}
        mid = lo if hi is None else (lo + hi) // 2
        self.ext = LinearExtension(self._known, d, self.coefficients, mid)

    def _parity_k(self, j: int) -> int:
        # some k with 1 + j + k in the field's parity class
        want = 1 if self.field.parity == ODD else 0
        return 0 if (1 + j) % 2 == want else 1

    def _extent(self, step: int, limit: int) -> int:
        """How many rows beyond the wall the j-evolution determines (0..limit)."""
        base = 0 if step < 0 else self.field.spec.second_wall + 1
        n = 0
        for m in range(1, limit + 1):
            j = base + step * m
            ok = True
            for i in range(1, self.d + 1):
                for k in (self._parity_k(j) - (i - 1), self._parity_k(j) - (i - 1) + 2):
                    try:
                        self.jev(i, j, k)
                    except Undetermined:
                        ok = False
            if not ok:
                break
            n = m
        return -n if step < 0 else n

    def _known(self, j: int, k: int):
        if j < self.lo or (self.hi is not None and j > self.hi):
            return None
        if self.lo <= j < 0 or (self.hi is not None and j > self.field.spec.second_wall + 1):
            return self.jev(1, j, k)
        return evolve_to(self.field, (1, j, k)) if j != 0 else self.field.one()

    def coefficients(self, s: int) -> list:
        if s not in self._coeffs:
            j = self.coeff_j
            w = build_window_matrix(self._known_strict, self.d + 2, (j, s - j + 1))
            self._coeffs[s] = coefficients_from_window(w, SUM)
        return self._coeffs[s]

    def _known_strict(self, j: int, k: int):
        v = self._known(j, k)
        if v is None:
            raise WindowExceeded((1, j, k))
        return v

    def x(self, j: int, k: int):
        return self.ext(j, k)

    __call__ = x

    def t(self, i: int, j: int, k: int):
        if i == self.d + 2 or i == -1:
            return 0
        return self.ext.t(i, j, k)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _window_points(field: TField, i: int, js: Iterable[int], ks: Iterable[int]):
    want = 1 if field.parity == ODD else 0
    return [(i, j, k) for j in js for k in ks if (i + j + k) % 2 == want]


def verify_wall_zeros(d: int, field: TubeField, window: dict | None = None) -> Report:
    """Zeros ``T[i,-j,k] = 0`` for ``1 <= j <= d`` and ones at ``j = 0``.

    ``window`` may give ``k`` (iterable of levels, default ``-4..4``).
    Each zero is checked twice: by j-direction evolution where that is
    determined, and by the recursion extension everywhere.
    """
    if field.d != d or not field.spec.wall_at_zero:
        raise ValueError("field must be a walled strip of rank d")
    ks = list((window or {}).get("k", range(-4, 5)))
    rep = Report(f"wall zeros, d={d}")
    ext = WallExtension(field)
    jev = ext.jev

    ones_bad = None
    for i in range(1, d + 1):
        for p in _window_points(field, i, [0], ks):
            if evolve_to(field, p) != 1:
                ones_bad = ones_bad or list(p)
    rep.add("T[i,0,k] = 1", ones_bad is None, "wall of ones", ones_bad)

    x0_bad = None
    for p in _window_points(field, 1, [0], ks):
        if ext.x(0, p[2]) != 1:
            x0_bad = x0_bad or list(p)
    rep.add("recursion extension reproduces x[0,k] = 1", x0_bad is None,
            "wall of ones", x0_bad)

    jev_bad = None
    undetermined = []
    ext_bad = None
    for i in range(1, d + 1):
        for jj in range(1, d + 1):
            for p in _window_points(field, i, [-jj], ks):
                try:
                    v = jev(*p)
                    if not is_zero(v):
                        jev_bad = jev_bad or {"point": list(p), "value": to_json_value(v)}
                except Undetermined:
                    undetermined.append(list(p))
                v = ext.t(*p)
                if not is_zero(v):
                    ext_bad = ext_bad or {"point": list(p), "value": to_json_value(v)}
    rep.add("T[i,-j,k] = 0 for 1 <= j <= d (j-direction evolution)", jev_bad is None,
            "zero window", jev_bad)
    if undetermined:
        rep.note("j-direction evolution undetermined (0/0)", "zero window",
                 {"count": len(undetermined), "first": undetermined[0]})
    rep.add("T[i,-j,k] = 0 for 1 <= j <= d (recursion extension)", ext_bad is None,
            "zero window", ext_bad)
    return rep


def verify_mirror(d: int, field: TubeField, window: dict | None = None) -> Report:
    """``T[i,j,k] = (-1)^(d i) T[d+1-i, -j-d-1, k]`` on the window.

    ``window`` may give ``j`` (default ``1..3``) and ``k`` (default ``-4..4``).
    The right-hand side lives beyond the wall and comes from the recursion
    extension; the left-hand side is read from the field.
    """
    if field.d != d or not field.spec.wall_at_zero:
        raise ValueError("field must be a walled strip of rank d")
    window = window or {}
    js = list(window.get("j", range(1, 4)))
    ks = list(window.get("k", range(-4, 5)))
    rep = Report(f"mirror, d={d}")
    ext = WallExtension(field)
    bad = None
    consistency_bad = None
    n = 0
    for i in range(0, d + 2):
        sign = -1 if (d * i) % 2 else 1
        for p in _window_points(field, i, js, ks):
            _, j, k = p
            lhs = evolve_to(field, p)
            rhs = ext.t(d + 1 - i, -j - d - 1, k)
            n += 1
            if lhs != sign * rhs:
                bad = bad or {"point": list(p), "lhs": to_json_value(lhs),
                              "rhs": to_json_value(rhs), "sign": sign}
            if 1 <= i <= d and ext.t(i, j, k) != lhs:
                consistency_bad = consistency_bad or list(p)
    rep.add("window determinants reproduce the strip values", consistency_bad is None,
            "determinant formula", consistency_bad)
    rep.add("T[i,j,k] = (-1)^(d i) T[d+1-i,-j-d-1,k]", bad is None, "mirror identity", bad)
    rep.info["points"] = n
    return rep


def wall_compatibility(d: int, j_max: int = 12, k_max: int = 6,
                       rng: random.Random | None = None, parity: str = EVEN) -> Report:
    """Ones at ``j = 0`` on the surface propagate to every level.

    The row ``j = 0`` is ordinary initial data equal to 1 (not a synthesized
    wall) and ``T[i,-1,k] = 0`` is the only boundary beyond it.
    """
    rng = rng or random.Random(0)
    base = strip_surface(d, range(1, j_max + 1), None, parity, rng)
    heights = dict(base.heights)
    values = dict(base.values)
    for i in range(1, d + 1):
        heights[(i, 0)] = flat_height(i, 0, parity)
        values[(i, 0)] = Fraction(1)
    surf = InitialSurface(heights, values)
    spec = StripSpec(d)
    strip = spec.resolver("rational")

    def resolve(p):
        v = strip(p)
        if v is not None:
            return v
        if 1 <= p[0] <= d and p[1] == -1:
            return Fraction(0)
        return None

    field = TField(surf, boundary=resolve)
    rep = Report(f"wall compatibility, d={d}")
    bad = None
    for i in range(1, d + 1):
        for k in range(0, k_max + 1):
            if (i + k) % 2 != (1 if field.parity == ODD else 0):
                continue
            v = evolve_to(field, (i, 0, k))
            if v != 1:
                bad = bad or {"point": [i, 0, k], "value": to_json_value(v)}
    rep.add("initial ones at j = 0 give T[i,0,k] = 1 for all computed k", bad is None,
            "wall compatibility", bad)
    return rep


def check_zamolodchikov(d: int, ell: int, field: TubeField,
                        k_range: Iterable[int] | None = None) -> Report:
    """Half-period reflection and full period ``2p`` with ``p = l + d + 2``.

    When ``p`` is odd the two sides of the reflection lie in the parity
    class opposite to ``(i, j, k)``; base points are chosen so that both
    sides belong to the field.
    """
    p = ell + d + 2
    ks = list(k_range) if k_range is not None else list(range(0, 2))
    rep = Report(f"Zamolodchikov periodicity, d={d}, l={ell}")
    rep.info["p"] = p
    want = 1 if field.parity == ODD else 0
    half_bad = full_bad = None
    pts = []
    n_half = 0
    for i in range(1, d + 1):
        for j in range(1, ell + 1):
            for k in ks:
                if (i + j + k + p) % 2 == want:
                    n_half += 1
                    if evolve_to(field, (i, j, k + p)) != evolve_to(field, (d + 1 - i, ell + 1 - j, k)):
                        half_bad = half_bad or [i, j, k]
                if (i + j + k) % 2 == want:
                    pts.append((i, j, k))
                    if evolve_to(field, (i, j, k + 2 * p)) != evolve_to(field, (i, j, k)):
                        full_bad = full_bad or [i, j, k]
    rep.add(f"T[i,j,k+{p}] = T[d+1-i,l+1-j,k]", half_bad is None and n_half > 0,
            "half-period reflection", half_bad)
    rep.add(f"T[i,j,k+{2 * p}] = T[i,j,k]", full_bad is None and bool(pts), "full period", full_bad)
    rep.info["minimal_period"] = minimal_period(field, pts, 2 * p)
    rep.info["points"] = len(pts) + n_half
    return rep


def minimal_period(field: TField, pts: Sequence, bound: int) -> int | None:
    """Smallest even ``P <= bound`` with ``T[k+P] = T[k]`` on ``pts``."""
    for period in range(2, bound + 1, 2):
        if all(evolve_to(field, (i, j, k + period)) == evolve_to(field, (i, j, k))
               for (i, j, k) in pts):
            return period
    return None


def positivity_report(field: TubeField, k_range: Iterable[int]) -> Report:
    rep = Report("positivity")
    bad = None
    d = field.d
    ell = field.spec.second_wall
    js = range(1, ell + 1) if ell is not None else sorted({j for _, j in field.surface.sites()})
    for k in k_range:
        for i in range(1, d + 1):
            for j in js:
                if (i + j + k) % 2 == (1 if field.parity == ODD else 0):
                    try:
                        v = evolve_to(field, (i, j, k))
                    except WindowExceeded:
                        continue
                    if not v > 0:
                        bad = bad or [i, j, k]
    rep.add("interior values are positive", bad is None, "positivity", bad)
    return rep


# ---------------------------------------------------------------------------
# recursion coefficients under walls
# ---------------------------------------------------------------------------

def walled_coefficients(field: TubeField, s: int, j: int | None = None) -> RecursionCoefficients:
    """Sum-direction coefficients at anchor ``s`` from a window inside ``j >= 1``."""
    d = field.d
    j = d + 2 if j is None else j
    w = build_window_matrix(field, d + 2, (j, s - j + 1))
    return RecursionCoefficients(SUM, s, coefficients_from_window(w, SUM), (j, s - j))


def verify_walled_coefficients(field: TubeField, sums: Iterable[int], n_anchors: int = 3,
                               pinned: int = 2) -> Report:
    """Independence of ``j - k`` and the identification with ``T[d+1-i, 1, .]``."""
    d = field.d
    rep = Report(f"recursion coefficients, d={d}")
    want = 1 if field.parity == ODD else 0
    sums = [s for s in sums if (1 + s - d) % 2 == want]
    if not sums:
        raise ValueError("no anchor of the field's parity")
    for s in sums:
        anchors = [(d + 2 + 2 * m, s - d - 2 - 2 * m) for m in range(n_anchors)]
        rep.extend(verify_direction_independence(field, d, SUM, anchors))
        rep.extend(verify_coefficient_identity(d, field, walled_coefficients(field, s),
                                               pinned=pinned))
    return rep


def verify_two_wall_lift(field: TubeField, a_range: Iterable[int]) -> Report:
    """Lift recursion and periodicity for a tube (needs the j-evolved zeros)."""
    d, ell = field.d, field.spec.second_wall
    ext = WallExtension(field, use_j_evolution=True)
    want = 1 if field.parity == ODD else 0
    j0 = 1
    # components of V_a have j + k = j0 + k0 - d + 2a
    k0 = next(k for k in (0, 1) if (1 + j0 + k - d) % 2 == want)
    rep = verify_lift_recursion(ext, d, a_range, base=(j0, k0), ell=ell)
    rep.info["determined_rows"] = [ext.lo, ext.hi]
    return rep
