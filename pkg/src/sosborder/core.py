"""Exact substrate: monomials, homogeneous polynomials over Q, exact linear algebra.

Monomials are plain tuples of exponents.  The only monomial order is lex with
x1 > x2 > ... > xn, which coincides with Python's tuple comparison, so
"descending lex" is simply ``sorted(..., reverse=True)``.

Coefficients are :class:`fractions.Fraction`.  Matrices are lists of rows.
Elimination runs on integer rows (denominators cleared, content removed after
every update) and only converts back to fractions at the end.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

Monomial = tuple
RationalMatrix = list  # list of rows of Fraction

Scalar = Union[int, Fraction]

LEX = "lex"


class DimensionError(ValueError):
    """Operands live in different numbers of variables (or shapes disagree)."""


class DegreeError(ValueError):
    """Degree mismatch, or a polynomial is not homogeneous."""


class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based offending offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# monomials

@lru_cache(maxsize=None)
def _monomials(n: int, d: int) -> tuple:
    if n == 1:
        return ((d,),)
    out = []
    for e in range(d, -1, -1):
        out.extend((e,) + rest for rest in _monomials(n - 1, d - e))
    return tuple(out)


def enumerate_monomials(n: int, d: int, order: str = LEX) -> list:
    """All degree-``d`` monomials in ``n`` variables, strictly descending in lex."""
    if order != LEX:
        raise ValueError(f"unsupported monomial order {order!r}")
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    return list(_monomials(n, d))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict:
    """Position of each degree-``d`` monomial in :func:`enumerate_monomials`."""
    return {m: i for i, m in enumerate(_monomials(n, d))}


def divides(a: Monomial, b: Monomial) -> bool:
    if len(a) != len(b):
        raise DimensionError(f"monomials in {len(a)} and {len(b)} variables")
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) != len(b):
        raise DimensionError(f"monomials in {len(a)} and {len(b)} variables")
    return tuple(x + y for x, y in zip(a, b))


def lex_cmp(a: Monomial, b: Monomial) -> int:
    """-1, 0 or 1 as ``a`` is lex-smaller, equal or lex-larger than ``b``."""
    if len(a) != len(b):
        raise DimensionError(f"monomials in {len(a)} and {len(b)} variables")
    return (a > b) - (a < b)


_ALIASES = "xyzw"


def format_monomial(m: Monomial, aliases: bool = False) -> str:
    """``(2, 0, 1)`` -> ``"x1^2*x3"``; the constant monomial is ``"1"``."""
    names = _ALIASES if aliases and len(m) <= 4 else None
    parts = []
    for i, e in enumerate(m):
        if e == 0:
            continue
        v = names[i] if names else f"x{i + 1}"
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# polynomials

class Polynomial:
    """Homogeneous polynomial in ``n`` variables with exact rational coefficients.

    Instances are treated as immutable.  The zero polynomial still carries a
    degree so that it can live in a graded component.
    """

    __slots__ = ("n", "degree", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, Scalar] | None = None,
                 degree: int | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != n:
                raise DimensionError(f"monomial {m} does not have {n} exponents")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        degs = {sum(m) for m in clean}
        if len(degs) > 1:
            lo, hi = min(degs), max(degs)
            raise DegreeError(f"non-homogeneous polynomial: degrees {lo} and {hi}")
        if degs:
            (deg,) = degs
            if degree is not None and degree != deg:
                raise DegreeError(f"declared degree {degree} but terms have degree {deg}")
        elif degree is None:
            raise DegreeError("the zero polynomial needs an explicit degree")
        else:
            deg = degree
        self.n = n
        self.degree = deg
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def monomial(cls, m: Monomial, coeff: Scalar = 1) -> "Polynomial":
        return cls(len(m), {tuple(m): coeff})

    @classmethod
    def zero(cls, n: int, degree: int) -> "Polynomial":
        return cls(n, {}, degree)

    @classmethod
    def from_vector(cls, n: int, d: int, vec: Sequence[Scalar]) -> "Polynomial":
        basis = _monomials(n, d)
        if len(vec) != len(basis):
            raise DimensionError(f"vector of length {len(vec)} for {len(basis)} monomials")
        return cls(n, {m: c for m, c in zip(basis, vec) if c}, d)

    # access
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> list:
        """(monomial, coefficient) pairs in descending lex order."""
        return sorted(self._terms.items(), reverse=True)

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def support(self) -> list:
        return sorted(self._terms, reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms)

    def to_vector(self) -> list:
        """Coefficients against ``enumerate_monomials(n, degree)``."""
        basis = _monomials(self.n, self.degree)
        return [self._terms.get(m, Fraction(0)) for m in basis]

    def evaluate(self, point: Sequence):
        """Value at ``point`` (ints, fractions, floats or complex all work)."""
        if len(point) != self.n:
            raise DimensionError(f"point of length {len(point)} for n={self.n}")
        total = 0
        for m, c in self._terms.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term = term * x ** e
            total = total + term
        return total

    # arithmetic
    def _check_n(self, other: "Polynomial") -> None:
        if self.n != other.n:
            raise DimensionError(f"polynomials in {self.n} and {other.n} variables")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_n(other)
        if self.degree != other.degree:
            raise DegreeError(f"cannot add degrees {self.degree} and {other.degree}")
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.n, out, self.degree)

    def __neg__(self):
        return Polynomial(self.n, {m: -c for m, c in self._terms.items()}, self.degree)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.n, {m: c * v for m, v in self._terms.items()}, self.degree)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_n(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.n, out, self.degree + other.degree)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial(self.n, {(0,) * self.n: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.degree, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.n}, {format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def poly_arith(op: str, f: Polynomial, g) -> Polynomial:
    """Dispatch ``add``/``sub``/``mul``/``scale``."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+)|[xyzw](?![0-9]))"
                    r"|(?P<op>[-+*^]))")


def _tokens(text: str) -> Iterator[tuple]:
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            return
        mt = _TOKEN.match(text, pos)
        if not mt:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        start = mt.start(mt.lastgroup) if mt.lastgroup != "idx" else mt.start("var")
        if mt.group("num") is not None:
            yield ("num", mt.group("num"), start)
        elif mt.group("var") is not None:
            v = mt.group("var")
            idx = int(mt.group("idx")) if mt.group("idx") else _ALIASES.index(v) + 1
            yield ("var", idx, start)
        else:
            yield ("op", mt.group("op"), start)
        pos = mt.end()


def parse_poly(text: str, n: int | None = None) -> Polynomial:
    """Parse a homogeneous polynomial, e.g. ``"-x1^2 - x1*x2 + 3/2*x4^2"``.

    ``x, y, z, w`` are accepted for ``x1..x4``.  When ``n`` is omitted it is
    the largest variable index that occurs (at least 1).
    """
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty polynomial", 0)
    terms: list = []  # (sign, coeff, {var: exp}, start)
    i = 0

    def peek(k=0):
        return toks[i + k] if i + k < len(toks) else None

    while i < len(toks):
        sign = 1
        tok = peek()
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            i += 1
        elif terms:
            raise ParseError(f"expected '+' or '-', got {tok[1]!r}", tok[2])
        tok = peek()
        if tok is None:
            raise ParseError("dangling sign", len(text))
        start = tok[2]
        coeff = Fraction(1)
        factors: dict = {}
        seen_any = False
        if tok[0] == "num":
            num, _, den = tok[1].partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", tok[2])
            coeff = Fraction(tok[1])
            i += 1
            seen_any = True
            tok = peek()
            if tok is not None and tok[0] == "op" and tok[1] == "*":
                i += 1
                tok = peek()
                if tok is None or tok[0] != "var":
                    raise ParseError("expected a variable after '*'", tok[2] if tok else len(text))
        while tok is not None and tok[0] == "var":
            var = tok[1]
            i += 1
            exp = 1
            nxt = peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "^":
                i += 1
                et = peek()
                if et is None or et[0] != "num" or "/" in et[1]:
                    raise ParseError("expected an integer exponent", et[2] if et else len(text))
                exp = int(et[1])
                i += 1
            factors[var] = factors.get(var, 0) + exp
            seen_any = True
            tok = peek()
            if tok is not None and tok[0] == "op" and tok[1] == "*":
                nxt = peek(1)
                if nxt is None or nxt[0] != "var":
                    raise ParseError("expected a variable after '*'", nxt[2] if nxt else len(text))
                i += 1
                tok = peek()
        if not seen_any:
            raise ParseError(f"expected a term, got {tok[1]!r}", tok[2])
        terms.append((sign, coeff, factors, start))

    top = max((max(f) for _, _, f, _ in terms if f), default=1)
    if n is None:
        n = top
    if top > n:
        raise DimensionError(f"variable x{top} used but n={n}")
    if any(v < 1 for _, _, f, _ in terms for v in f):
        raise ParseError("variable index must be >= 1", 0)

    out: dict = {}
    first_deg = None
    for sign, coeff, factors, start in terms:
        m = [0] * n
        for v, e in factors.items():
            m[v - 1] += e
        m = tuple(m)
        deg = sum(m)
        if first_deg is None:
            first_deg = deg
        elif deg != first_deg:
            raise DegreeError(
                f"non-homogeneous polynomial: degrees {first_deg} and {deg} (term at position {start})")
        out[m] = out.get(m, 0) + sign * coeff
    return Polynomial(n, out, first_deg)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(f: Polynomial, aliases: bool = False) -> str:
    """Canonical text: lex-descending terms, ``coeff*monomial``, unit coefficients elided."""
    items = f.items()
    if not items:
        return "0"
    parts = []
    for k, (m, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(m, aliases)
        if mono == "1":
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if k == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)


# ---------------------------------------------------------------------------
# exact linear algebra

def _integer_row(row: Sequence[Scalar]) -> list:
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = den * x.denominator // math.gcd(den, x.denominator)
    if den == 1:
        return [int(x) for x in row]
    return [int(x * den) for x in row]


def _primitive(row: list) -> list:
    g = math.gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def _echelon(rows: list, ncols: int, reduced: bool, stop_at_full: bool = True):
    """In-place fraction-free elimination on integer rows.

    Returns (rows, pivots) where the first ``len(pivots)`` rows are the
    echelon rows (fully reduced above and below each pivot when ``reduced``).
    """
    rows = [_primitive(r) for r in rows if any(r)]
    pivots: list = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        # pick the nonzero entry of smallest magnitude to limit growth
        best = None
        for i in range(r, nrows):
            v = rows[i][c]
            if v and (best is None or abs(v) < abs(rows[best][c])):
                best = i
                if abs(v) == 1:
                    break
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        p = prow[c]
        start = 0 if reduced else r + 1
        for i in range(start, nrows):
            if i == r:
                continue
            a = rows[i][c]
            if not a:
                continue
            g = math.gcd(p, a)
            pp, aa = p // g, a // g
            rows[i] = _primitive([pp * x - aa * y for x, y in zip(rows[i], prow)])
        pivots.append(c)
        r += 1
        if not reduced:
            # drop rows that became zero so later scans stay short
            tail = [row for row in rows[r:] if any(row)]
            rows[r:] = tail
            nrows = len(rows)
        if stop_at_full and r == ncols:
            break
    return rows[:r], pivots


def rref(M: Sequence[Sequence[Scalar]], ncols: int | None = None):
    """Exact reduced row echelon form.

    Returns ``(R, pivots, rank)``; ``R`` keeps the input's row count, with zero
    rows at the bottom.
    """
    M = list(M)
    if ncols is None:
        ncols = len(M[0]) if M else 0
    for row in M:
        if len(row) != ncols:
            raise DimensionError("ragged matrix")
    rows, pivots = _echelon([_integer_row(r) for r in M], ncols, reduced=True)
    R = []
    for row, c in zip(rows, pivots):
        p = row[c]
        R.append([Fraction(x, p) for x in row])
    zero = [Fraction(0)] * ncols
    R.extend(list(zero) for _ in range(len(M) - len(R)))
    return R, pivots, len(pivots)


def rank(M: Sequence[Sequence[Scalar]], ncols: int | None = None) -> int:
    """Exact rank via forward elimination only."""
    M = list(M)
    if ncols is None:
        ncols = len(M[0]) if M else 0
    _, pivots = _echelon([_integer_row(r) for r in M], ncols, reduced=False)
    return len(pivots)


def nullspace(M: Sequence[Sequence[Scalar]], ncols: int | None = None) -> list:
    """Exact basis of the right kernel, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns (the usual rref-canonical basis).
    """
    M = list(M)
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots, rk = rref(M, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def transpose(M: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*M)]


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in M]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def identity(m: int) -> list:
    return [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]


def same_row_space(A: Sequence[Sequence], B: Sequence[Sequence], ncols: int) -> bool:
    """True iff the row spaces coincide (compared through their rref)."""
    RA, pa, ra = rref(A, ncols) if A else ([], [], 0)
    RB, pb, rb = rref(B, ncols) if B else ([], [], 0)
    return ra == rb and pa == pb and RA[:ra] == RB[:rb]


def as_fractions(M: Iterable[Iterable]) -> list:
    return [[Fraction(x) for x in row] for row in M]
