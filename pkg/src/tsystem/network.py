"""Network-matrix solution of the octahedron relation.

Geometry used here (all coordinates are absolute lattice coordinates):

* Faces are the sites ``(i, j)`` of the flat odd-parity surface.  Face
  ``(i, j)`` is the triangle between node rows ``y = j - 1/2`` and
  ``y = j + 1/2``; it points up when ``i + j`` is odd.
* Nodes are ``(i, y)`` with ``y`` a half-integer and ``i + y + 1/2`` even.
  Internally a node is stored as ``(i, 2y)``.
* Every edge borders exactly one up triangle.  For the up triangle ``f`` at
  ``(i, j)``, with neighbour faces ``a = (i-1, j-1)``, ``b = (i-1, j)``,
  ``c = (i, j+1)``, ``d = (i+1, j)``, ``e = (i, j-1)``, the weights are::

      bottom-left -> top          a / f
      top -> bottom-right         c / d
      bottom-left -> bottom-right a b / (e f)

  All edges point towards increasing ``i``.
* For ``T[i0, j0, k]`` the network is the node diamond
  ``|i - i0| + |y - j0 + 1/2| <= k - 1``.  Left port ``m`` (``m = 0..k-1``)
  is ``(i0 - m, j0 - k + 1/2 + m)`` on the south-west edge, right port ``m``
  is ``(i0 + m, j0 - k + 1/2 + m)`` on the south-east edge.  The black dots
  are the faces ``(i0 + m, j0 - k + 1 + m)`` along the south-east face edge.
* Face variables outside the face diamond ``|di| + |dj| <= k - 1`` are set
  to 1.  With that choice ``T = det(N) * prod(black dots)`` holds exactly;
  keeping the outside faces would multiply ``det(N)`` by the faces just
  beyond the south-west edge, a pure boundary gauge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .algebra import kind_of, laurent_div_exact, ring_one, ring_zero
from .lattice import InitialSurface, ODD, diamond_sites, flat_height

Node = tuple[int, int]  # (i, 2y)
Face = tuple[int, int]


class DiamondExceedsSurface(ValueError):
    def __init__(self, msg: str = "diamond exceeds surface"):
        super().__init__(msg)


@dataclass
class NetworkDiamond:
    center: tuple[int, int]
    size: int
    faces: dict[Face, object]
    nodes: list[Node]
    edges: list[tuple[Node, Node, object]]
    left_ports: list[Node]
    right_ports: list[Node]
    black_dots: list[Face]
    kind: str = "rational"
    _out: dict = field(default=None, repr=False)

    def out_edges(self) -> dict[Node, list[tuple[Node, object]]]:
        if self._out is None:
            out: dict[Node, list] = {n: [] for n in self.nodes}
            for s, t, w in self.edges:
                out[s].append((t, w))
            self._out = out
        return self._out

    def black_dot_values(self) -> list:
        return [self.faces[f] for f in self.black_dots]


def _node_parity_ok(i: int, m: int) -> bool:
    # node (i, y) with y = m/2 must have i + y + 1/2 even
    return (i + (m + 1) // 2) % 2 == 0


def build_diamond(surface: InitialSurface, i: int, j: int, k: int) -> NetworkDiamond:
    if k < 1:
        raise ValueError("network size must be at least 1")
    if (i + j + k) % 2 != 1:
        raise ValueError("the network solution covers points with i + j + k odd")
    faces = {}
    for s in diamond_sites(i, j, k - 1):
        if s not in surface:
            raise DiamondExceedsSurface()
        if surface.height(*s) != flat_height(*s, ODD):
            raise ValueError("network requires the flat odd-parity surface on the diamond")
        faces[s] = surface.value(*s)
    kind = kind_of(next(iter(faces.values())))
    one = ring_one(kind)

    def fv(a: int, b: int):
        return faces.get((a, b), one)

    def div(x, y):
        if kind == "laurent":
            return laurent_div_exact(x, y)
        return x / y

    nodes = []
    for a in range(i - k + 1, i + k):
        for m in range(2 * (j - k) + 1, 2 * (j + k), 2):
            if 2 * abs(a - i) + abs(m - (2 * j - 1)) <= 2 * (k - 1) and _node_parity_ok(a, m):
                nodes.append((a, m))
    nodes.sort()
    node_set = set(nodes)

    edges = []
    for fi in range(i - k - 1, i + k + 2):
        for fj in range(j - k - 1, j + k + 2):
            if (fi + fj) % 2 == 0:
                continue  # not an up triangle
            top, bl, br = (fi, 2 * fj + 1), (fi - 1, 2 * fj - 1), (fi + 1, 2 * fj - 1)
            f = fv(fi, fj)
            a, b = fv(fi - 1, fj - 1), fv(fi - 1, fj)
            c, d, e = fv(fi, fj + 1), fv(fi + 1, fj), fv(fi, fj - 1)
            for s, t, w in ((bl, top, (a, f)), (top, br, (c, d)), (bl, br, (a * b, e * f))):
                if s in node_set and t in node_set:
                    edges.append((s, t, div(*w)))
    edges.sort(key=lambda e: (e[0], e[1]))

    base = 2 * (j - k) + 1
    left = [(i - m, base + 2 * m) for m in range(k)]
    right = [(i + m, base + 2 * m) for m in range(k)]
    dots = [(i + m, j - k + 1 + m) for m in range(k)]
    return NetworkDiamond((i, j), k, faces, nodes, edges, left, right, dots, kind)


def path_matrix(d: NetworkDiamond) -> list[list]:
    """Matrix of path partition functions from left port a to right port b."""
    out = d.out_edges()
    zero = ring_zero(d.kind)
    one = ring_one(d.kind)
    rows = []
    for src in d.left_ports:
        part = {src: one}
        for n in d.nodes:  # sorted by i, a topological order
            w0 = part.get(n)
            if w0 is None:
                continue
            for t, w in out[n]:
                part[t] = part.get(t, zero) + w0 * w
        rows.append([part.get(t, zero) for t in d.right_ports])
    return rows


def _det(m: list[list]):
    from .condensation import bareiss_determinant

    return bareiss_determinant(m)


def t_via_network(d: NetworkDiamond):
    """``det(path_matrix) * prod(black dots)``."""
    val = _det(path_matrix(d))
    for f in d.black_dots:
        val = val * d.faces[f]
    return val


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------

def enumerate_paths(d: NetworkDiamond, src: Node, dst: Node) -> Iterator[tuple[tuple[Node, ...], object]]:
    """All directed paths from ``src`` to ``dst`` with their weights."""
    out = d.out_edges()
    one = ring_one(d.kind)

    def walk(n, path, w):
        if n == dst:
            yield tuple(path), w
            return
        for t, wt in out[n]:
            if t[0] <= dst[0]:
                path.append(t)
                yield from walk(t, path, w * wt)
                path.pop()

    yield from walk(src, [src], one)


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for s in range(len(perm)):
        if seen[s]:
            continue
        length = 0
        t = s
        while not seen[t]:
            seen[t] = True
            t = perm[t]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def lgv_bruteforce(d: NetworkDiamond):
    """Signed sum over vertex-disjoint path families (independent of det)."""
    k = d.size
    paths = {
        (a, b): list(enumerate_paths(d, d.left_ports[a], d.right_ports[b]))
        for a in range(k)
        for b in range(k)
    }
    total = ring_zero(d.kind)
    for perm in itertools.permutations(range(k)):
        sign = _perm_sign(perm)
        for combo in itertools.product(*(paths[(a, perm[a])] for a in range(k))):
            used = set()
            ok = True
            for p, _ in combo:
                if used.intersection(p):
                    ok = False
                    break
                used.update(p)
            if not ok:
                continue
            w = ring_one(d.kind)
            for _, pw in combo:
                w = w * pw
            total = total + w if sign > 0 else total - w
    return total


def count_paths(d: NetworkDiamond) -> list[list[int]]:
    """Path counts between ports by exhaustive enumeration."""
    return [
        [sum(1 for _ in enumerate_paths(d, s, t)) for t in d.right_ports]
        for s in d.left_ports
    ]


def network_json(d: NetworkDiamond) -> dict:
    from .algebra import to_json_value

    det = _det(path_matrix(d))
    return {
        "center": list(d.center),
        "k": d.size,
        "det": to_json_value(det),
        "blackdots": [to_json_value(v) for v in d.black_dot_values()],
        "T": to_json_value(t_via_network(d)),
    }
