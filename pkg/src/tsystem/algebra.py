"""Exact coefficient rings.

Two kinds of coefficient values flow through every evolution in this package:

* :class:`fractions.Fraction` for numeric instances, and
* :class:`LaurentPolynomial`, sparse integer Laurent polynomials in the
  initial-data symbols ``x[i,j]``.

A computation picks one kind up front.  Mixing them raises
:class:`MixedKindsError`; plain Python ``int`` is accepted by both as a
constant.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Var = tuple[int, int]
Monomial = tuple[tuple[Var, int], ...]

UNIT: Monomial = ()


class AlgebraError(ArithmeticError):
    pass


class MixedKindsError(TypeError):
    def __init__(self, msg: str = "mixed coefficient kinds"):
        super().__init__(msg)


class NonLaurentQuotient(AlgebraError):
    def __init__(self, msg: str = "non-Laurent quotient"):
        super().__init__(msg)


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        s = d.get(v, 0) + e
        if s:
            d[v] = s
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mono_inv(a: Monomial) -> Monomial:
    return tuple((v, -e) for v, e in a)


def mono_pow(a: Monomial, n: int) -> Monomial:
    if n == 0:
        return UNIT
    return tuple((v, e * n) for v, e in a)


def _mono_str(m: Monomial) -> str:
    parts = []
    for (i, j), e in m:
        s = f"x[{i},{j}]"
        if e != 1:
            s += f"^{e}"
        parts.append(s)
    return "*".join(parts)


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentPolynomial:
    """Sparse Laurent polynomial with integer coefficients.

    Immutable.  ``terms`` maps a monomial (sorted tuple of ``((i, j), exp)``
    pairs, zero exponents never stored) to a nonzero ``int``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        if terms:
            self._terms = {m: int(c) for m, c in terms.items() if c}
        else:
            self._terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> "LaurentPolynomial":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def var(cls, i: int, j: int, exp: int = 1) -> "LaurentPolynomial":
        if exp == 0:
            return cls.constant(1)
        return cls._raw({(((i, j), exp),): 1})

    @classmethod
    def constant(cls, c: int) -> "LaurentPolynomial":
        return cls._raw({UNIT: int(c)} if c else {})

    @classmethod
    def monomial(cls, m: Monomial, coeff: int = 1) -> "LaurentPolynomial":
        return cls._raw({m: coeff} if coeff else {})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.sorted_terms())

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and UNIT in self._terms)

    def variables(self) -> set[Var]:
        out: set[Var] = set()
        for m in self._terms:
            out.update(v for v, _ in m)
        return out

    def coefficients(self) -> list[int]:
        return list(self._terms.values())

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return LaurentPolynomial.constant(other)
        if isinstance(other, Fraction):
            raise MixedKindsError()
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if len(o._terms) > len(self._terms):
            big, small = o._terms, self._terms
        else:
            big, small = self._terms, o._terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                del out[m]
        return LaurentPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return LaurentPolynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise NonLaurentQuotient()
            (m, c), = self._terms.items()
            if c not in (1, -1):
                raise NonLaurentQuotient()
            return LaurentPolynomial._raw({mono_pow(m, n): c ** (-n)})
        result = LaurentPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _div_exact_poly(self, o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _div_exact_poly(o, self)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self._terms == other._terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self._terms == LaurentPolynomial.constant(other)._terms
        if isinstance(other, Fraction):
            return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation / display ---------------------------------------------
    def evaluate(self, values: Mapping[Var, Fraction | int]) -> Fraction:
        """Substitute numbers for every variable."""
        total = Fraction(0)
        for m, c in self._terms.items():
            t = Fraction(c)
            for v, e in m:
                t *= Fraction(values[v]) ** e
            total += t
        return total

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            ms = _mono_str(m)
            if not ms:
                body = str(abs(c))
            elif abs(c) == 1:
                body = ms
            else:
                body = f"{abs(c)}*{ms}"
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    # -- serialization ----------------------------------------------------
    def to_json(self) -> list[dict]:
        return [
            {"coeff": c, "exps": [[i, j, e] for (i, j), e in m]}
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> "LaurentPolynomial":
        out: dict[Monomial, int] = {}
        for term in data:
            m = tuple(sorted(((int(i), int(j)), int(e)) for i, j, e in term["exps"] if e))
            c = int(term["coeff"])
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return cls._raw(out)


# ---------------------------------------------------------------------------
# exact division
# ---------------------------------------------------------------------------

def _div_exact_poly(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    if b.is_zero():
        raise ZeroDivisionError("division by zero")
    if a.is_zero():
        return a
    if b.is_monomial():
        (mb, cb), = b._terms.items()
        inv = mono_inv(mb)
        out = {}
        for m, c in a._terms.items():
            q, rem = divmod(c, cb)
            if rem:
                raise NonLaurentQuotient()
            out[mono_mul(m, inv)] = q
        return LaurentPolynomial._raw(out)

    # Dense exponent vectors over the union of variables; lex order on Z^n is a
    # group order, so LT(a) = LT(q) * LT(b) whenever b divides a.  Quotient
    # exponents are confined to the box [min_a - min_b, max_a - max_b], which
    # bounds the search when the division is not exact.
    vs = sorted(a.variables() | b.variables())
    index = {v: n for n, v in enumerate(vs)}
    nv = len(vs)

    def dense(m: Monomial) -> tuple[int, ...]:
        e = [0] * nv
        for v, x in m:
            e[index[v]] = x
        return tuple(e)

    ra = {dense(m): c for m, c in a._terms.items()}
    rb = [(dense(m), c) for m, c in b._terms.items()]
    lt_b, lc_b = max(rb)

    lo = []
    hi = []
    for n in range(nv):
        ea = [e[n] for e in ra]
        eb = [e[n] for e, _ in rb]
        lo.append(min(ea) - min(eb))
        hi.append(max(ea) - max(eb))
        if lo[-1] > hi[-1]:
            raise NonLaurentQuotient()

    heap = [tuple(-x for x in e) for e in ra]
    heapq.heapify(heap)
    quot: dict[tuple[int, ...], int] = {}
    while heap:
        key = heapq.heappop(heap)
        e = tuple(-x for x in key)
        c = ra.get(e)
        if not c:
            continue
        qe = tuple(x - y for x, y in zip(e, lt_b))
        for n in range(nv):
            if not lo[n] <= qe[n] <= hi[n]:
                raise NonLaurentQuotient()
        qc, rem = divmod(c, lc_b)
        if rem:
            raise NonLaurentQuotient()
        quot[qe] = qc
        for eb, cb in rb:
            t = tuple(x + y for x, y in zip(qe, eb))
            s = ra.get(t, 0) - qc * cb
            if s:
                if t not in ra:
                    heapq.heappush(heap, tuple(-x for x in t))
                ra[t] = s
            else:
                ra.pop(t, None)
    out = {}
    for qe, c in quot.items():
        m = tuple((vs[n], x) for n, x in enumerate(qe) if x)
        out[m] = c
    return LaurentPolynomial._raw(out)


# ---------------------------------------------------------------------------
# ring contract
# ---------------------------------------------------------------------------

RingValue = Union[Fraction, LaurentPolynomial]


def kind_of(a) -> str:
    if isinstance(a, LaurentPolynomial):
        return "laurent"
    if isinstance(a, (Fraction, int)) and not isinstance(a, bool):
        return "rational"
    raise TypeError(f"not a coefficient value: {a!r}")


def _check_same_kind(a, b) -> None:
    if kind_of(a) != kind_of(b):
        raise MixedKindsError()


def ring_arith(op: str, a: RingValue, b: RingValue) -> RingValue:
    _check_same_kind(a, b)
    if op == "add":
        r = a + b
    elif op == "sub":
        r = a - b
    elif op == "mul":
        r = a * b
    else:
        raise ValueError(f"unknown ring operation {op!r}")
    return Fraction(r) if isinstance(r, int) else r


def laurent_div_exact(a: RingValue, b: RingValue) -> RingValue:
    """Exact quotient ``a / b``.

    Rationals divide as usual.  Laurent polynomials must divide exactly in
    the Laurent ring, otherwise :class:`NonLaurentQuotient` is raised.
    """
    _check_same_kind(a, b)
    if isinstance(a, LaurentPolynomial) or isinstance(b, LaurentPolynomial):
        a = a if isinstance(a, LaurentPolynomial) else LaurentPolynomial.constant(a)
        b = b if isinstance(b, LaurentPolynomial) else LaurentPolynomial.constant(b)
        return _div_exact_poly(a, b)
    if b == 0:
        raise ZeroDivisionError("division by zero")
    return Fraction(a) / Fraction(b)


def laurent_is_positive(a: LaurentPolynomial) -> bool:
    return all(c > 0 for c in a._terms.values())


def one_like(a: RingValue) -> RingValue:
    if isinstance(a, LaurentPolynomial):
        return LaurentPolynomial.constant(1)
    return Fraction(1)


def zero_like(a: RingValue) -> RingValue:
    if isinstance(a, LaurentPolynomial):
        return LaurentPolynomial()
    return Fraction(0)


def ring_one(kind: str) -> RingValue:
    return LaurentPolynomial.constant(1) if kind == "laurent" else Fraction(1)


def ring_zero(kind: str) -> RingValue:
    return LaurentPolynomial() if kind == "laurent" else Fraction(0)


def is_zero(a) -> bool:
    if isinstance(a, LaurentPolynomial):
        return a.is_zero()
    return a == 0


# ---------------------------------------------------------------------------
# ratios of Laurent polynomials (Y-variables over the symbolic ring)
# ---------------------------------------------------------------------------

class LaurentRatio:
    """Formal quotient ``num / den`` of Laurent polynomials.

    Reduced only as far as exact division allows; equality is decided by
    cross-multiplication, so two representations of the same rational
    function compare equal.
    """

    __slots__ = ("num", "den")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial | None = None):
        if den is None:
            den = LaurentPolynomial.constant(1)
        if den.is_zero():
            raise ZeroDivisionError("division by zero")
        if den.is_monomial() and abs(next(iter(den._terms.values()))) == 1:
            num, den = _div_exact_poly(num, den), LaurentPolynomial.constant(1)
        elif not num.is_zero():
            try:
                num, den = _div_exact_poly(num, den), LaurentPolynomial.constant(1)
            except NonLaurentQuotient:
                pass
        self.num = num
        self.den = den

    @staticmethod
    def _lift(x) -> "LaurentRatio":
        if isinstance(x, LaurentRatio):
            return x
        if isinstance(x, LaurentPolynomial):
            return LaurentRatio(x)
        if isinstance(x, int) and not isinstance(x, bool):
            return LaurentRatio(LaurentPolynomial.constant(x))
        if isinstance(x, Fraction):
            raise MixedKindsError()
        return NotImplemented

    def is_polynomial(self) -> bool:
        return self.den == LaurentPolynomial.constant(1)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return LaurentRatio(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return LaurentRatio(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return LaurentRatio(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return LaurentRatio(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.num * o.den == o.num * self.den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def evaluate(self, values: Mapping[Var, Fraction | int]) -> Fraction:
        return self.num.evaluate(values) / self.den.evaluate(values)

    def __repr__(self):
        if self.is_polynomial():
            return f"LaurentRatio({self.num})"
        return f"LaurentRatio(({self.num}) / ({self.den}))"


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str | int | Fraction) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"not a rational: {s!r}")
    text = s.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def to_json_value(v):
    if isinstance(v, LaurentPolynomial):
        return v.to_json()
    if isinstance(v, LaurentRatio):
        return {"num": v.num.to_json(), "den": v.den.to_json()}
    return format_rational(v)


def from_json_value(data):
    if isinstance(data, list):
        return LaurentPolynomial.from_json(data)
    return parse_rational(data)
