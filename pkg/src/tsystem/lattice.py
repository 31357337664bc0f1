"""Octahedron relation and Y-system on a window of Z^3.

    T[i,j,k+1] T[i,j,k-1] = T[i,j+1,k] T[i,j-1,k] + T[i+1,j,k] T[i-1,j,k]

A :class:`TField` stores one parity class of points.  Values come from an
:class:`InitialSurface` (a height function with unit steps) and are
propagated up or down in ``k`` on demand with memoization.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional

from .algebra import (
    LaurentPolynomial,
    LaurentRatio,
    MixedKindsError,
    from_json_value,
    is_zero,
    kind_of,
    laurent_div_exact,
    ring_one,
    to_json_value,
)

Point = tuple[int, int, int]
Site = tuple[int, int]

ODD = "odd"
EVEN = "even"


class LatticeError(Exception):
    pass


class UnresolvedPoint(LatticeError):
    def __init__(self, p=None):
        msg = "unresolved point" if p is None else f"unresolved point {p}"
        super().__init__(msg)
        self.point = p


class WindowExceeded(UnresolvedPoint):
    def __init__(self, p=None):
        LatticeError.__init__(self, "window exceeded" if p is None else f"window exceeded at {p}")
        self.point = p


class DegenerateData(LatticeError):
    def __init__(self, msg: str = "degenerate initial data"):
        super().__init__(msg)


class SingularYStep(LatticeError):
    def __init__(self, msg: str = "singular Y-step"):
        super().__init__(msg)


class NotTwoInTwoOut(LatticeError):
    def __init__(self, msg: str = "vertex not two-in-two-out"):
        super().__init__(msg)


def parity_of(i: int, j: int, k: int) -> str:
    return ODD if (i + j + k) % 2 else EVEN


def flat_height(i: int, j: int, parity: str = ODD) -> int:
    """Height of the flat surface of the given parity: 0 or 1."""
    return (i + j + (1 if parity == ODD else 0)) % 2


def symbol(i: int, j: int) -> LaurentPolynomial:
    return LaurentPolynomial.var(i, j)


# ---------------------------------------------------------------------------
# initial data
# ---------------------------------------------------------------------------

class InitialSurface:
    """Height function ``k(i, j)`` with a value at each site."""

    def __init__(self, heights: Mapping[Site, int], values: Mapping[Site, object]):
        if set(heights) != set(values):
            raise ValueError("heights and values must cover the same sites")
        self.heights = dict(heights)
        self.values = dict(values)
        self._validate()

    def _validate(self) -> None:
        parities = {(i + j + k) % 2 for (i, j), k in self.heights.items()}
        if len(parities) > 1:
            raise ValueError("surface points do not share one parity")
        for (i, j), k in self.heights.items():
            for nb in ((i + 1, j), (i, j + 1)):
                if nb in self.heights and abs(self.heights[nb] - k) != 1:
                    raise ValueError(f"height step at {(i, j)}-{nb} is not 1")
        kinds = {kind_of(v) for v in self.values.values()}
        if len(kinds) > 1:
            raise MixedKindsError()

    @property
    def parity(self) -> str:
        for (i, j), k in self.heights.items():
            return parity_of(i, j, k)
        return ODD

    @property
    def kind(self) -> str:
        for v in self.values.values():
            return kind_of(v)
        return "rational"

    def __contains__(self, site) -> bool:
        return site in self.heights

    def height(self, i: int, j: int) -> int:
        return self.heights[(i, j)]

    def value(self, i: int, j: int):
        return self.values[(i, j)]

    def sites(self) -> list[Site]:
        return sorted(self.heights)

    @classmethod
    def flat(
        cls,
        sites: Iterable[Site],
        values="sym",
        parity: str = ODD,
    ) -> "InitialSurface":
        """Flat surface on ``sites``.

        ``values`` is ``"sym"`` (the symbol ``x[i,j]`` at each site), a
        mapping, or a callable ``(i, j) -> value``.
        """
        sites = list(sites)
        heights = {(i, j): flat_height(i, j, parity) for i, j in sites}
        if values == "sym":
            vals = {(i, j): symbol(i, j) for i, j in sites}
        elif callable(values):
            vals = {(i, j): values(i, j) for i, j in sites}
        else:
            vals = {s: values[s] for s in sites}
        vals = {s: Fraction(v) if isinstance(v, int) else v for s, v in vals.items()}
        return cls(heights, vals)

    def with_site(self, site: Site, height: int, value) -> "InitialSurface":
        h = dict(self.heights)
        v = dict(self.values)
        h[site] = height
        v[site] = value
        return InitialSurface(h, v)

    def __eq__(self, other):
        if not isinstance(other, InitialSurface):
            return NotImplemented
        return self.heights == other.heights and self.values == other.values

    # -- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        entries = []
        for i, j in self.sites():
            v = self.values[(i, j)]
            if isinstance(v, LaurentPolynomial) and v == symbol(i, j):
                sv = "sym"
            else:
                sv = to_json_value(v)
            entries.append({"i": i, "j": j, "k": self.heights[(i, j)], "value": sv})
        return {"parity": self.parity, "entries": entries}

    @classmethod
    def from_json(cls, data: Mapping) -> "InitialSurface":
        heights = {}
        values = {}
        for e in data["entries"]:
            i, j, k = int(e["i"]), int(e["j"]), int(e["k"])
            raw = e.get("value", data.get("value"))
            heights[(i, j)] = k
            values[(i, j)] = symbol(i, j) if raw == "sym" else from_json_value(raw)
        surf = cls(heights, values)
        if "parity" in data and surf.heights and surf.parity != data["parity"]:
            raise ValueError("declared parity does not match the entries")
        return surf


def diamond_sites(i: int, j: int, radius: int) -> list[Site]:
    return [
        (i + a, j + b)
        for a in range(-radius, radius + 1)
        for b in range(-radius + abs(a), radius - abs(a) + 1)
    ]


def square_sites(radius: int) -> list[Site]:
    return [(i, j) for i in range(-radius, radius + 1) for j in range(-radius, radius + 1)]


# ---------------------------------------------------------------------------
# T-field
# ---------------------------------------------------------------------------

Resolver = Callable[[Point], Optional[object]]


class TField:
    """Memoized solution of the octahedron relation over a surface.

    ``boundary`` is an optional callable consulted before anything else;
    it returns a synthesized value for boundary points and ``None``
    elsewhere.
    """

    def __init__(self, surface: InitialSurface, boundary: Resolver | None = None,
                 kind: str | None = None):
        self.surface = surface
        self.parity = surface.parity
        self.kind = kind or surface.kind
        self.boundary = boundary
        self.store: dict[Point, object] = {}

    def one(self):
        return ring_one(self.kind)

    def in_parity(self, p: Point) -> bool:
        return parity_of(*p) == self.parity

    def lookup(self, p: Point):
        """Value if it is known without evolving, else ``None``."""
        if self.boundary is not None:
            v = self.boundary(p)
            if v is not None:
                return v
        v = self.store.get(p)
        if v is not None:
            return v
        i, j, k = p
        h = self.surface.heights.get((i, j))
        if h is not None and h == k:
            return self.surface.values[(i, j)]
        return None

    def resolve(self, p: Point):
        v = self.lookup(p)
        if v is None:
            raise UnresolvedPoint(p)
        return v

    def __getitem__(self, p: Point):
        return evolve_to(self, p)

    def insert(self, p: Point, value) -> None:
        if not self.in_parity(p):
            raise ValueError(f"point {p} has the wrong parity for this field")
        self.store[p] = value


def _divide(num, den):
    if is_zero(den):
        raise DegenerateData()
    return laurent_div_exact(num, den)


def octahedron_step(field: TField, p: Point):
    """Return ``T[i,j,k+1]`` from the level-``k`` neighbours and ``T[i,j,k-1]``."""
    i, j, k = p
    up = field.resolve((i, j + 1, k))
    dn = field.resolve((i, j - 1, k))
    rt = field.resolve((i + 1, j, k))
    lt = field.resolve((i - 1, j, k))
    below = field.resolve((i, j, k - 1))
    return _divide(up * dn + rt * lt, below)


def octahedron_step_down(field: TField, p: Point):
    """Return ``T[i,j,k-1]`` from the level-``k`` neighbours and ``T[i,j,k+1]``."""
    i, j, k = p
    up = field.resolve((i, j + 1, k))
    dn = field.resolve((i, j - 1, k))
    rt = field.resolve((i + 1, j, k))
    lt = field.resolve((i - 1, j, k))
    above = field.resolve((i, j, k + 1))
    return _divide(up * dn + rt * lt, above)


def evolve_to(field: TField, p: Point):
    """Evaluate ``T`` at ``p`` by evolving up or down from the surface.

    Results are cached in ``field.store``.  Raises :class:`WindowExceeded`
    when the dependency cone leaves the surface.
    """
    if not field.in_parity(p):
        raise ValueError(f"point {p} has the wrong parity for this field")
    v = field.lookup(p)
    if v is not None:
        return v
    # iterative post-order walk, so deep evolutions do not hit the
    # interpreter's recursion limit
    stack = [p]
    while stack:
        q = stack[-1]
        if field.lookup(q) is not None:
            stack.pop()
            continue
        i, j, k = q
        h = field.surface.heights.get((i, j))
        if h is None:
            raise WindowExceeded(q)
        step = 1 if k > h else -1
        deps = [(i, j + 1, k - step), (i, j - 1, k - step),
                (i + 1, j, k - step), (i - 1, j, k - step), (i, j, k - 2 * step)]
        missing = [d for d in deps if field.lookup(d) is None]
        if missing:
            stack.extend(missing)
            if len(stack) > 10 ** 6:
                raise WindowExceeded(q)
            continue
        stack.pop()
        if step == 1:
            field.store[q] = octahedron_step(field, (i, j, k - 1))
        else:
            field.store[q] = octahedron_step_down(field, (i, j, k + 1))
    return field.lookup(p)


def evolvable_points(field: TField, k_values: Iterable[int],
                     sites: Iterable[Site] | None = None) -> list[Point]:
    """Points whose light cone lies inside the surface."""
    surf = field.surface
    sites = surf.sites() if sites is None else list(sites)
    out = []
    for k in k_values:
        for i, j in sites:
            if (i, j) not in surf or (i + j + k) % 2 != (1 if field.parity == ODD else 0):
                continue
            m = abs(k - surf.height(i, j))
            if all(s in surf for s in diamond_sites(i, j, m)):
                out.append((i, j, k))
    return out


def fill_levels(field: TField, k_values: Iterable[int],
                sites: Iterable[Site] | None = None) -> dict[Point, object]:
    """Evaluate every evolvable point on the given levels."""
    return {p: evolve_to(field, p) for p in evolvable_points(field, k_values, sites)}


# ---------------------------------------------------------------------------
# cluster structure
# ---------------------------------------------------------------------------

def cluster_mutation(surface: InitialSurface, site: Site) -> InitialSurface:
    """Mutate the surface at ``site``: replace the value and move the height by 2."""
    i, j = site
    nbs = [(i, j + 1), (i, j - 1), (i + 1, j), (i - 1, j)]
    if site not in surface or any(nb not in surface for nb in nbs):
        raise NotTwoInTwoOut()
    h = surface.height(i, j)
    nh = {surface.height(*nb) for nb in nbs}
    if nh == {h + 1}:
        new_h = h + 2
    elif nh == {h - 1}:
        new_h = h - 2
    else:
        raise NotTwoInTwoOut()
    x = surface.values
    num = x[(i, j + 1)] * x[(i, j - 1)] + x[(i + 1, j)] * x[(i - 1, j)]
    return surface.with_site(site, new_h, _divide(num, x[site]))


def b_matrix_entry(a: Site, b: Site) -> int:
    """Exchange-matrix entry between two sites of the flat surface."""
    (i, j), (ip, jp) = a, b
    val = int(i == ip and abs(j - jp) == 1) - int(j == jp and abs(i - ip) == 1)
    return val if (i + j) % 2 == 0 else -val


# ---------------------------------------------------------------------------
# Y-system
# ---------------------------------------------------------------------------

def y_from_t(field: TField, p: Point):
    """``Y = T[i+1] T[i-1] / (T[j+1] T[j-1])`` at level ``k`` around ``p``."""
    i, j, k = p
    num = evolve_to(field, (i + 1, j, k)) * evolve_to(field, (i - 1, j, k))
    den = evolve_to(field, (i, j + 1, k)) * evolve_to(field, (i, j - 1, k))
    if is_zero(den):
        raise DegenerateData("degenerate")
    if isinstance(num, LaurentPolynomial):
        return LaurentRatio(num, den)
    return num / den


class YField:
    """Y-values grown from two consecutive base levels.

    ``base`` maps ``(i, j, k)`` to a value for ``k`` in ``{k0, k0+1}``.
    ``wrap``, if given, must expose ``reduce((i, j)) -> (i, j)`` and makes
    the field periodic in ``(i, j)``.
    """

    def __init__(self, base: Mapping[Point, object], wrap=None):
        if not base:
            raise ValueError("empty Y initial data")
        levels = sorted({k for _, _, k in base})
        if len(levels) > 2 or (len(levels) == 2 and levels[1] != levels[0] + 1):
            raise ValueError("Y initial data must sit on two consecutive levels")
        self.k0 = levels[0]
        self.wrap = wrap
        self.store: dict[Point, object] = {}
        for p, v in base.items():
            if is_zero(v):
                raise SingularYStep("zero Y initial value")
            self.store[self._key(p)] = v
        self.base_keys = set(self.store)
        self.parity = parity_of(*next(iter(base)))

    def _key(self, p: Point) -> Point:
        if self.wrap is None:
            return p
        i, j = self.wrap.reduce((p[0], p[1]))
        return (i, j, p[2])

    def lookup(self, p: Point):
        return self.store.get(self._key(p))

    def resolve(self, p: Point):
        v = self.lookup(p)
        if v is None:
            raise UnresolvedPoint(p)
        return v

    def __getitem__(self, p: Point):
        return self.get(p)

    def get(self, p: Point):
        v = self.lookup(p)
        if v is not None:
            return v
        if parity_of(*p) != self.parity:
            raise ValueError(f"point {p} has the wrong parity for this field")
        stack = [p]
        while stack:
            q = stack[-1]
            if self.lookup(q) is not None:
                stack.pop()
                continue
            i, j, k = q
            if self.k0 <= k <= self.k0 + 1:
                raise UnresolvedPoint(q)
            s = 1 if k > self.k0 + 1 else -1
            deps = [(i + 1, j, k - s), (i - 1, j, k - s), (i, j + 1, k - s),
                    (i, j - 1, k - s), (i, j, k - 2 * s)]
            missing = [d for d in deps if self.lookup(d) is None]
            if missing:
                stack.extend(missing)
                if len(stack) > 10 ** 6:
                    raise WindowExceeded(q)
                continue
            stack.pop()
            if s == 1:
                val = y_step(self, (i, j, k - 1))
            else:
                val = y_step_down(self, (i, j, k + 1))
            self.store[self._key(q)] = val
        return self.lookup(p)


def _y_rhs(yf, i: int, j: int, k: int):
    a = yf.resolve((i + 1, j, k))
    b = yf.resolve((i - 1, j, k))
    c = yf.resolve((i, j + 1, k))
    e = yf.resolve((i, j - 1, k))
    for y in (a, b, c, e):
        if is_zero(y) or is_zero(y + 1):
            raise SingularYStep()
    return (1 + a) * (1 + b) / ((1 + 1 / c) * (1 + 1 / e))


def y_step(yfield: YField, p: Point):
    """Return ``Y[i,j,k+1]`` from level ``k`` and ``Y[i,j,k-1]``."""
    i, j, k = p
    prev = yfield.resolve((i, j, k - 1))
    if is_zero(prev):
        raise SingularYStep()
    return _y_rhs(yfield, i, j, k) / prev


def y_step_down(yfield: YField, p: Point):
    """Return ``Y[i,j,k-1]`` from level ``k`` and ``Y[i,j,k+1]``."""
    i, j, k = p
    nxt = yfield.resolve((i, j, k + 1))
    if is_zero(nxt):
        raise SingularYStep()
    return _y_rhs(yfield, i, j, k) / nxt


def y_system_residual(values: Mapping[Point, object], p: Point):
    """``Y[k+1] Y[k-1] - RHS`` at ``p`` for a plain dict of Y-values."""

    class _D:
        def resolve(self, q):
            return values[q]

    i, j, k = p
    return values[(i, j, k + 1)] * values[(i, j, k - 1)] - _y_rhs(_D(), i, j, k)

