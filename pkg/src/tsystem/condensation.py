"""Determinants, window matrices and the linear recursions of the A_d T-system.

With ``x[j,k] = T[1,j,k]`` and ``T[0,.,.] = 1`` every ``T[s,j,k]`` is the
determinant of the ``s x s`` window ``M(s; j, k)`` whose 0-indexed entry
``(r, c)`` is ``x[j - r + c, k - (s-1) + r + c]``.  When ``T[d+2] = 0`` the
``(d+2)``-windows are singular and their kernels give linear recursions for
``x`` along the two diagonal directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import LaurentPolynomial, is_zero, laurent_div_exact, to_json_value
from .report import Report

Matrix = list[list]
XSource = Callable[[int, int], object]

SUM = "sum"
DIFFERENCE = "difference"


def _exact_div(a, b):
    if isinstance(a, LaurentPolynomial) or isinstance(b, LaurentPolynomial):
        return laurent_div_exact(a, b)
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    return a / b


def _zero_like(m: Matrix):
    for row in m:
        for v in row:
            return v - v
    return 0


def _one_like(m: Matrix):
    for row in m:
        for v in row:
            if isinstance(v, LaurentPolynomial):
                return LaurentPolynomial.constant(1)
            return Fraction(1) if isinstance(v, Fraction) else 1
    return 1


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------

def laplace_determinant(m: Matrix):
    """Cofactor expansion along the first row.  Slow; used as an oracle."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = None
    for c in range(n):
        if is_zero(m[0][c]):
            continue
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        term = m[0][c] * laplace_determinant(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return _zero_like(m) if total is None else total


def bareiss_determinant(m: Matrix):
    """Fraction-free Gaussian elimination with row pivoting."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = None
    for p in range(n - 1):
        if is_zero(a[p][p]):
            swap = next((r for r in range(p + 1, n) if not is_zero(a[r][p])), None)
            if swap is None:
                return _zero_like(m)
            a[p], a[swap] = a[swap], a[p]
            sign = -sign
        for r in range(p + 1, n):
            for c in range(p + 1, n):
                v = a[r][c] * a[p][p] - a[r][p] * a[p][c]
                a[r][c] = v if prev is None else _exact_div(v, prev)
        prev = a[p][p]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


@dataclass
class CondensationResult:
    determinant: object
    method: str  # "condensation" or "bareiss"
    stages: list[Matrix]


def condense(m: Matrix) -> CondensationResult:
    """Dodgson condensation, falling back to Bareiss on a zero interior pivot.

    ``stages[t]`` holds the connected ``t x t`` minors; the last stage is the
    1x1 matrix containing the determinant.
    """
    n = len(m)
    if n == 0:
        return CondensationResult(1, "condensation", [])
    one = _one_like(m)
    below = [[one] * (n + 1) for _ in range(n + 1)]
    cur = [list(row) for row in m]
    stages = [cur]
    size = n
    while size > 1:
        nxt = []
        for r in range(size - 1):
            row = []
            for c in range(size - 1):
                piv = below[r + 1][c + 1]
                num = cur[r][c] * cur[r + 1][c + 1] - cur[r][c + 1] * cur[r + 1][c]
                if is_zero(piv):
                    return CondensationResult(bareiss_determinant(m), "bareiss", stages)
                row.append(_exact_div(num, piv))
            nxt.append(row)
        below, cur = cur, nxt
        stages.append(cur)
        size -= 1
    return CondensationResult(cur[0][0], "condensation", stages)


def dodgson_determinant(m: Matrix):
    return condense(m).determinant


def delete(m: Matrix, rows: Iterable[int], cols: Iterable[int]) -> Matrix:
    rows, cols = set(rows), set(cols)
    return [[v for c, v in enumerate(row) if c not in cols]
            for r, row in enumerate(m) if r not in rows]


def desnanot_sides(m: Matrix, det: Callable = laplace_determinant):
    """Both sides of the Desnanot-Jacobi identity (1-indexed rows/cols 1 and n)."""
    n = len(m) - 1
    lhs = det(m) * det(delete(m, [0, n], [0, n]))
    rhs = det(delete(m, [0], [0])) * det(delete(m, [n], [n])) - \
        det(delete(m, [0], [n])) * det(delete(m, [n], [0]))
    return lhs, rhs


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------

@dataclass
class MatrixWindow:
    size: int
    anchor: tuple[int, int]
    indices: list[list[tuple[int, int]]]
    entries: Matrix

    def determinant(self):
        return dodgson_determinant(self.entries) if self.size else 1


def window_indices(s: int, j: int, k: int) -> list[list[tuple[int, int]]]:
    return [[(j - r + c, k - (s - 1) + r + c) for c in range(s)] for r in range(s)]


def as_x_source(field) -> XSource:
    """``x(j, k) = T[1, j, k]`` for a T-field, or the callable itself."""
    if callable(field):
        return field
    from .lattice import evolve_to

    return lambda j, k: evolve_to(field, (1, j, k))


def build_window_matrix(field, size: int, anchor: tuple[int, int]) -> MatrixWindow:
    x = as_x_source(field)
    j, k = anchor
    idx = window_indices(size, j, k)
    return MatrixWindow(size, (j, k), idx, [[x(a, b) for a, b in row] for row in idx])


# ---------------------------------------------------------------------------
# recursion coefficients
# ---------------------------------------------------------------------------

class NonGenericWindow(ValueError):
    def __init__(self, msg: str = "non-generic window"):
        super().__init__(msg)


@dataclass
class RecursionCoefficients:
    """Kernel of a singular ``(d+2)``-window, normalised so that ``a[0] = 1``.

    Sum direction: ``sum_i a[i] x[j+i, k-d+i] = 0`` with ``anchor = j + k``.
    Difference direction: ``sum_i a[i] x[j-i, k-d+i] = 0`` with
    ``anchor = j - k``.  ``c[i] = (-1)^i a[i]`` for ``1 <= i <= d``.
    """

    direction: str
    anchor: int
    coeffs: list
    window_anchor: tuple[int, int]

    @property
    def d(self) -> int:
        return len(self.coeffs) - 2

    @property
    def c(self) -> list:
        """``c_1 .. c_d`` in the sign convention of the recursion."""
        return [a if i % 2 == 0 else -a for i, a in enumerate(self.coeffs)][1:-1]

    def normalization_ok(self) -> bool:
        d = self.d
        return self.coeffs[-1] == (-1 if d % 2 == 0 else 1)

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "anchor": self.anchor,
            "window_anchor": list(self.window_anchor),
            "coeffs": [to_json_value(a) for a in self.coeffs],
            "c": [to_json_value(a) for a in self.c],
        }


def _cofactor_row0(m: Matrix) -> list:
    n = len(m)
    out = []
    for c in range(n):
        minor = delete(m, [0], [c])
        v = dodgson_determinant(minor) if minor else 1
        out.append(v if c % 2 == 0 else -v)
    return out


def coefficients_from_window(w: MatrixWindow, direction: str = SUM) -> list:
    """Normalised kernel vector of a ``(d+2)``-window via first-row/column cofactors."""
    m = w.entries
    if direction == DIFFERENCE:
        m = [list(col) for col in zip(*m)]
    cof = _cofactor_row0(m)
    if is_zero(cof[0]):
        raise NonGenericWindow()
    return [_exact_div(a, cof[0]) for a in cof]


def recursion_coefficients(field, d: int, direction: str = SUM,
                           anchor: tuple[int, int] = (0, 0)) -> RecursionCoefficients:
    """Coefficients of the recursion through ``x[j, k-d]`` for ``anchor = (j, k)``.

    They come from the window ``M(d+2; j, k+1)``: its right kernel for the
    sum direction, its left kernel for the difference direction.
    """
    if direction not in (SUM, DIFFERENCE):
        raise ValueError(f"unknown direction {direction!r}")
    j, k = anchor
    w = build_window_matrix(field, d + 2, (j, k + 1))
    a = coefficients_from_window(w, direction)
    res = window_residuals(w, a, direction)
    if any(not is_zero(r) for r in res):
        raise NonGenericWindow()
    label = j + k if direction == SUM else j - k
    return RecursionCoefficients(direction, label, a, (j, k))


def window_residuals(w: MatrixWindow, a: Sequence, direction: str = SUM) -> list:
    """``M a`` (sum) or ``a^T M`` (difference): one residual per row/column."""
    m = w.entries
    if direction == DIFFERENCE:
        m = [list(col) for col in zip(*m)]
    out = []
    for row in m:
        acc = row[0] * a[0]
        for v, c in zip(row[1:], a[1:]):
            acc = acc + v * c
        out.append(acc)
    return out


def nullspace_oracle(m: Matrix) -> list | None:
    """Right kernel vector with first entry 1, by plain Gaussian elimination.

    Independent of the cofactor route; returns ``None`` if the kernel is not
    one-dimensional or the first entry vanishes.
    """
    n = len(m)
    a = [[Fraction(v) if not isinstance(v, LaurentPolynomial) else v for v in row] for row in m]
    if any(isinstance(v, LaurentPolynomial) for row in a for v in row):
        raise TypeError("rational matrices only")
    pivots = []
    r = 0
    for c in range(n):
        p = next((q for q in range(r, n) if a[q][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for q in range(n):
            if q != r and a[q][c] != 0:
                f = a[q][c]
                a[q] = [vq - f * vr for vq, vr in zip(a[q], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    fcol = free[0]
    vec = [Fraction(0)] * n
    vec[fcol] = Fraction(1)
    for row, pc in enumerate(pivots):
        vec[pc] = -a[row][fcol]
    if vec[0] == 0:
        return None
    return [v / vec[0] for v in vec]


# ---------------------------------------------------------------------------
# extension of x by the recursion
# ---------------------------------------------------------------------------

class LinearExtension:
    """``x[j, k]`` on all of ``Z^2`` (one parity class) from a known region.

    ``known(j, k)`` returns a value or ``None``.  Coefficients for the sum
    direction are supplied by ``coeffs_for_sum(s)``.  Unknown points are
    obtained from the recursion through them, stepping towards
    ``j_target``.
    """

    def __init__(self, known: Callable[[int, int], object], d: int,
                 coeffs_for_sum: Callable[[int], Sequence], j_target: int):
        self.known = known
        self.d = d
        self.coeffs_for_sum = coeffs_for_sum
        self.j_target = j_target
        self.memo: dict[tuple[int, int], object] = {}

    def __call__(self, j: int, k: int):
        v = self._peek(j, k)
        if v is not None:
            return v
        d = self.d
        stack = [(j, k)]
        while stack:
            jj, kk = stack[-1]
            if self._peek(jj, kk) is not None:
                stack.pop()
                continue
            if jj < self.j_target:
                # x[jj,kk] is the first term of the relation anchored at (jj, kk+d)
                a = self.coeffs_for_sum(jj + kk + d)
                deps = [(jj + i, kk + i) for i in range(1, d + 2)]
                lead = 0
            else:
                # x[jj,kk] is the last term of the relation anchored at (jj-d-1, kk-1+d)
                a = self.coeffs_for_sum(jj + kk - d - 2)
                deps = [(jj - d - 1 + i, kk - d - 1 + i) for i in range(0, d + 1)]
                lead = d + 1
            missing = [p for p in deps if self._peek(*p) is None]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            acc = None
            for i, p in zip([i for i in range(d + 2) if i != lead], deps):
                t = a[i] * self._peek(*p)
                acc = t if acc is None else acc + t
            self.memo[(jj, kk)] = _exact_div(-acc, a[lead])
        return self._peek(j, k)

    def _peek(self, j: int, k: int):
        v = self.memo.get((j, k))
        if v is not None:
            return v
        v = self.known(j, k)
        if v is not None:
            self.memo[(j, k)] = v
        return v

    def t(self, i: int, j: int, k: int):
        """``T[i, j, k]`` as a window determinant (``T[0] = 1``, ``T[-1] = 0``)."""
        if i == 0:
            return 1
        if i < 0:
            return 0
        return build_window_matrix(self, i, (j, k)).determinant()


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def verify_coefficient_identity(d: int, field, coeffs: RecursionCoefficients,
                                shifts: Sequence[int] = (0, 2), pinned: int | None = 2) -> Report:
    """Compare ``c_i`` with ``T[d+1-i, 1, k+d+i+shift]`` on a walled field.

    ``k`` is defined by the sum anchor ``s = k + d + 1``, i.e. the relation
    whose first term is ``x[1, k]``.  Every shift in ``shifts`` is reported;
    only ``pinned`` (if given) counts towards pass/fail.
    """
    rep = Report("coefficient identity")
    if coeffs.direction != SUM:
        raise ValueError("the identity concerns sum-direction coefficients")
    k = coeffs.anchor - d - 1
    a = coeffs.coeffs
    holds = {}
    for shift in shifts:
        ok_all = True
        bad = None
        for i in range(0, d + 2):
            ci = a[i] if i % 2 == 0 else -a[i]
            tv = _t_with_rows(field, d, d + 1 - i, k + d + i + shift)
            if ci != tv:
                ok_all = False
                bad = {"i": i, "c": to_json_value(ci), "T": to_json_value(tv)}
                break
        holds[shift] = ok_all
        if pinned is None or shift != pinned:
            rep.note(f"c_i = T[d+1-i, 1, k+d+i+{shift}]", "conserved-quantity identification",
                     {"holds": ok_all, "counterexample": bad})
        else:
            rep.add(f"c_i = T[d+1-i, 1, k+d+i+{shift}]", ok_all,
                    "conserved-quantity identification", bad)
    rep.info["shift_holds"] = {str(s): v for s, v in holds.items()}
    return rep


def _t_with_rows(field, d: int, i: int, k: int):
    from .lattice import evolve_to

    if i == 0:
        return 1
    if i == d + 1:
        return 1
    if i < 0 or i > d + 1:
        return 0
    return evolve_to(field, (i, 1, k)) if not callable(field) else field(i, 1, k)


def verify_direction_independence(field, d: int, direction: str,
                                  anchors: Sequence[tuple[int, int]]) -> Report:
    """Coefficients at anchors sharing ``j+k`` (sum) or ``j-k`` (difference) coincide."""
    rep = Report(f"{direction}-direction independence")
    if len(anchors) < 2:
        raise ValueError("need at least two anchors")
    labels = {(j + k) if direction == SUM else (j - k) for j, k in anchors}
    if len(labels) != 1:
        raise ValueError("anchors do not share the conserved label")
    ref = recursion_coefficients(field, d, direction, anchors[0])
    for anc in anchors[1:]:
        other = recursion_coefficients(field, d, direction, anc)
        rep.add(f"coefficients at {tuple(anc)} equal those at {tuple(anchors[0])}",
                other.coeffs == ref.coeffs, "conserved along the orthogonal direction",
                {"a": [to_json_value(v) for v in ref.coeffs],
                 "b": [to_json_value(v) for v in other.coeffs]})
    rep.add("leading/trailing normalisation a_{d+1} = -(-1)^d", ref.normalization_ok(),
            "recursion normalisation", [to_json_value(v) for v in ref.coeffs])
    return rep


def lifted_vector(x: XSource, d: int, a: int, base: tuple[int, int] = (0, 0)) -> list:
    """``V_a``: component ``b`` is ``x[j0 + a - b, k0 - d + a + b]``."""
    j0, k0 = base
    return [x(j0 + a - b, k0 - d + a + b) for b in range(d + 1)]


def verify_lift_recursion(x: XSource, d: int, a_range: Iterable[int],
                          base: tuple[int, int] = (0, 0), ell: int | None = None) -> Report:
    """Recursion, unit determinants and (with two walls) periodicity of ``V_a``.

    ``x`` must be defined wherever the vectors and windows need it, e.g. a
    :class:`LinearExtension`.
    """
    j0, k0 = base
    rep = Report("lifted vectors")
    a_range = list(a_range)
    vec = {}

    def V(a):
        if a not in vec:
            vec[a] = lifted_vector(x, d, a, base)
        return vec[a]

    def alpha(a):
        # coefficients of the relation whose first point is component 0 of V_a
        w = build_window_matrix(x, d + 2, (j0 + a, k0 + a + 1))
        return coefficients_from_window(w, SUM)

    ok_rec = ok_det = True
    bad_rec = bad_det = None
    for a in a_range:
        al = alpha(a)
        for b in range(d + 1):
            acc = 0
            for i in range(d + 2):
                acc = acc + al[i] * V(a + i)[b]
            if not is_zero(acc):
                ok_rec = False
                bad_rec = bad_rec or {"a": a, "row": b, "residual": to_json_value(acc)}
        mat = [[V(a + c)[r] for c in range(d + 1)] for r in range(d + 1)]
        dv = dodgson_determinant(mat)
        if dv != 1:
            ok_det = False
            bad_det = bad_det or {"a": a, "det": to_json_value(dv)}
    rep.add("V_a + sum (-1)^i alpha_i V_{a+i} - (-1)^d V_{a+d+1} = 0", ok_rec,
            "lifted-vector recursion", bad_rec)
    rep.add("det(V_a, ..., V_{a+d}) = 1", ok_det, "unit solid minors", bad_det)
    if ell is not None:
        p = ell + d + 2
        sign = -1 if d % 2 else 1
        ok_v = ok_a = True
        bad_v = bad_a = None
        for a in a_range:
            if [sign * v for v in V(a)] != V(a + p):
                ok_v = False
                bad_v = bad_v or {"a": a}
            if alpha(a) != alpha(a + p):
                ok_a = False
                bad_a = bad_a or {"a": a}
        rep.add(f"V_(a+p) = (-1)^d V_a with p = {p}", ok_v, "periodic lift", bad_v)
        rep.add(f"alpha_(a+p) = alpha_a with p = {p}", ok_a, "periodic coefficients", bad_a)
        rep.add(f"coefficient count p*d = {p * d} exceeds data count l*d = {ell * d} by d(d+2)",
                p * d - ell * d == d * (d + 2), "relation count")
    return rep
