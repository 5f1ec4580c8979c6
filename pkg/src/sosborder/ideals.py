"""Hilbert functions of graded ideals, lex-plus-powers ideals, colon components.

Polynomial ideals are handled one graded piece at a time: ``I_k`` is the span
of ``g * q`` over generators ``g`` and monomials ``q`` of the complementary
degree, reduced exactly.  Nothing beyond degree ``n(d-1) + 1`` is ever needed,
so no Groebner engine is built.

Why ``contains_sop`` only looks at one degree: if ``I`` (generated in degree
``d``) contains a sequence of parameters ``p_1..p_n`` of degree ``d``, then
``I_k`` contains ``<p_1..p_n>_k`` and ``HF_k(I)`` is bounded by the complete
intersection's value, which vanishes above the socle degree ``n(d-1)``.
Conversely ``HF_k(I) = 0`` for some ``k`` means ``sqrt(I)`` is the irrelevant
ideal, and then ``n`` generic combinations of the degree-``d`` generators form
a sequence of parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence, Union

from .core import (
    DegreeError,
    DimensionError,
    Polynomial,
    _echelon,
    _integer_row,
    divides,
    enumerate_monomials,
    format_monomial,
    format_poly,
    monomial_index,
    rref,
)


class ContainmentError(ValueError):
    """J is not contained in I where containment is required."""


def n_monomials(n: int, k: int) -> int:
    return comb(n + k - 1, k) if k >= 0 else 0


# ---------------------------------------------------------------------------
# monomial ideals

@dataclass(frozen=True)
class MonomialIdeal:
    n: int
    generators: frozenset

    def __init__(self, n: int, generators: Iterable):
        gens = {tuple(g) for g in generators}
        for g in gens:
            if len(g) != n:
                raise DimensionError(f"generator {g} does not have {n} exponents")
        # minimalize: keep only generators not divisible by another one
        minimal = {g for g in gens if not any(h != g and divides(h, g) for h in gens)}
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "generators", frozenset(minimal))

    @classmethod
    def powers(cls, n: int, d: int) -> "MonomialIdeal":
        return cls(n, [tuple(d if j == i else 0 for j in range(n)) for i in range(n)])

    def contains(self, m) -> bool:
        return any(divides(g, m) for g in self.generators)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        if self.n != other.n:
            raise DimensionError("ideals in different rings")
        return MonomialIdeal(self.n, self.generators | other.generators)

    def sorted_generators(self) -> list:
        return sorted(self.generators, key=lambda m: (sum(m), tuple(-e for e in m)))

    def __str__(self):
        return "<" + ", ".join(format_monomial(g) for g in self.sorted_generators()) + ">"


def hf_monomial(M: MonomialIdeal, k: int) -> int:
    """Number of degree-``k`` monomials outside ``M``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    gens = list(M.generators)
    return sum(1 for m in enumerate_monomials(M.n, k)
               if not any(all(a <= b for a, b in zip(g, m)) for g in gens))


def standard_monomials(M: MonomialIdeal, k: int) -> list:
    """Degree-``k`` monomials not in ``M``, lex-descending."""
    return [m for m in enumerate_monomials(M.n, k) if not M.contains(m)]


def lpp_ideal(n: int, d: int, s: int, target_hf: int) -> MonomialIdeal:
    """Pure ``d``-th powers plus the lex-first degree-``s`` monomials reaching ``HF_s = target_hf``.

    Degree-``s`` monomials already in the powers ideal are skipped.
    """
    if n < 1 or d < 2 or s < d:
        raise ValueError("need n >= 1, d >= 2, s >= d")
    powers = MonomialIdeal.powers(n, d)
    free = standard_monomials(powers, s)
    if not 0 <= target_hf <= len(free):
        raise ValueError(f"HF_{s} = {target_hf} unreachable (powers ideal has {len(free)})")
    return MonomialIdeal(n, list(powers.generators) + free[:len(free) - target_hf])


def lpp_ideal_by_count(n: int, d: int, s: int, count: int) -> MonomialIdeal:
    """Same construction, specified by the number of added degree-``s`` monomials."""
    free = len(standard_monomials(MonomialIdeal.powers(n, d), s))
    return lpp_ideal(n, d, s, free - count)


# ---------------------------------------------------------------------------
# polynomial ideals

@dataclass(frozen=True)
class IdealGens:
    """Ideal generated by nonzero forms of one common degree ``d``."""

    n: int
    d: int
    generators: tuple

    def __init__(self, generators: Sequence[Polynomial], n: int | None = None,
                 d: int | None = None):
        gens = tuple(generators)
        if not gens and (n is None or d is None):
            raise ValueError("an empty generator list needs explicit n and d")
        n = gens[0].n if n is None else n
        d = gens[0].degree if d is None else d
        for g in gens:
            if g.n != n:
                raise DimensionError(f"generator in {g.n} variables, expected {n}")
            if g.degree != d:
                raise DegreeError(f"generator of degree {g.degree}, expected {d}")
            if g.is_zero():
                raise ValueError("zero generator")
        if d < 1:
            raise DegreeError("ideals generated by constants are not supported")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_monomial_ideal(cls, M: MonomialIdeal) -> "IdealGens":
        degs = {sum(g) for g in M.generators}
        if len(degs) != 1:
            raise DegreeError("monomial ideal is not generated in a single degree")
        return cls([Polynomial.monomial(g) for g in M.sorted_generators()])

    @property
    def rank(self) -> int:
        """Dimension of the span of the generators (= dim I_d)."""
        return graded_basis(self, self.d).dim

    def __add__(self, other: "IdealGens") -> "IdealGens":
        return IdealGens(self.generators + other.generators, self.n, self.d)

    def __str__(self):
        return "<" + ", ".join(format_poly(g) for g in self.generators) + ">"


@dataclass(frozen=True)
class GradedBasis:
    """Rows: rref coordinates of a basis of ``I_k`` against the lex monomial basis."""

    k: int
    basis: list = field(compare=False)
    leading: list = field(compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)


def _product_rows(polys: Iterable[Polynomial], n: int, k: int) -> list:
    idx = monomial_index(n, k)
    rows = []
    for g in polys:
        e = k - g.degree
        if e < 0:
            continue
        for q in enumerate_monomials(n, e):
            row = [0] * len(idx)
            for m, c in g.terms.items():
                row[idx[tuple(a + b for a, b in zip(m, q))]] = c
            rows.append(row)
    return rows


@lru_cache(maxsize=4096)
def _graded_basis(polys: tuple, n: int, k: int) -> GradedBasis:
    ncols = n_monomials(n, k)
    rows = _product_rows(polys, n, k)
    if not rows:
        return GradedBasis(k, [], [])
    R, pivots, rk = rref(rows, ncols)
    basis_monos = enumerate_monomials(n, k)
    return GradedBasis(k, R[:rk], [basis_monos[c] for c in pivots])


@lru_cache(maxsize=4096)
def _component_dim(polys: tuple, n: int, k: int) -> int:
    ncols = n_monomials(n, k)
    rows = _product_rows(polys, n, k)
    if not rows:
        return 0
    _, pivots = _echelon([_integer_row(r) for r in rows], ncols, reduced=False)
    return len(pivots)


def graded_basis(I: IdealGens, k: int) -> GradedBasis:
    """Exact rref basis of ``I_k`` with its leading (pivot) monomials."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _graded_basis(I.generators, I.n, k)


def component_dim(polys: Sequence[Polynomial], n: int, k: int) -> int:
    """``dim <polys>_k`` for forms of any degrees (used for mixed-degree sums)."""
    return _component_dim(tuple(polys), n, k)


def hf_generated(polys: Sequence[Polynomial], n: int, k: int) -> int:
    """``HF_k`` of the ideal generated by arbitrary homogeneous ``polys``."""
    return n_monomials(n, k) - component_dim(polys, n, k)


def hf_poly(I: IdealGens, k: int) -> int:
    """Exact ``HF_k(I)``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k < I.d:
        return n_monomials(I.n, k)
    return n_monomials(I.n, k) - _component_dim(I.generators, I.n, k)


def leading_monomials_d(I: IdealGens) -> list:
    """Pivot monomials of ``I_d`` (= the degree-``d`` part of ``Lt(I)``)."""
    return graded_basis(I, I.d).leading


def is_leading_powers(I: IdealGens) -> bool:
    lead = set(leading_monomials_d(I))
    return all(tuple(I.d if j == i else 0 for j in range(I.n)) in lead for i in range(I.n))


def contains_sop(I: IdealGens) -> bool:
    """True iff ``HF_{n(d-1)+1}(I) = 0``."""
    return hf_poly(I, I.n * (I.d - 1) + 1) == 0


def _reduce(vec: list, basis: GradedBasis, pivots: list) -> list:
    out = list(vec)
    for row, c in zip(basis.basis, pivots):
        a = out[c]
        if a:
            out = [x - a * y for x, y in zip(out, row)]
    return out


def _pivot_columns(basis: GradedBasis, n: int) -> list:
    idx = monomial_index(n, basis.k)
    return [idx[m] for m in basis.leading]


def ideal_contains(I: IdealGens, f: Polynomial) -> bool:
    """Exact membership test for a homogeneous ``f``."""
    if f.is_zero():
        return True
    gb = graded_basis(I, f.degree)
    if not gb.basis:
        return False
    return not any(_reduce(f.to_vector(), gb, _pivot_columns(gb, I.n)))


@dataclass(frozen=True)
class ColonComponent:
    t: int
    dim: int  # dim (J:I)_t
    hf: int   # HF_t((J:I))


def colon_component(J: IdealGens, I: IdealGens, t: int) -> ColonComponent:
    """Degree-``t`` piece of ``(J : I)``, computed as an exact kernel dimension.

    ``(J:I)_t = {f in H_t : f*g in J for every generator g of I}``.  Each
    product is reduced modulo ``J_{t+e}``; the colon piece is the kernel of
    ``f -> (residues of f*g_i)``.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if J.n != I.n:
        raise DimensionError("ideals in different rings")
    n = J.n
    if not all(ideal_contains(I, g) for g in J.generators):
        raise ContainmentError("J is not contained in I")
    e = I.d
    total = n_monomials(n, t)
    gb = graded_basis(J, t + e) if t + e >= J.d else GradedBasis(t + e, [], [])
    if gb.dim == n_monomials(n, t + e):
        return ColonComponent(t, total, 0)
    pivots = _pivot_columns(gb, n)
    idx = monomial_index(n, t + e)
    rows = []
    for q in enumerate_monomials(n, t):
        residue = []
        for g in I.generators:
            vec = [Fraction(0)] * len(idx)
            for m, c in g.terms.items():
                vec[idx[tuple(a + b for a, b in zip(m, q))]] = c
            residue.extend(_reduce(vec, gb, pivots))
        rows.append(residue)
    image = rref(rows)[2]
    dim = total - image
    return ColonComponent(t, dim, total - dim)


# ---------------------------------------------------------------------------
# tables

@dataclass
class HilbertTable:
    ideal: str
    values: list  # [(k, HF_k), ...]

    def hf(self) -> list:
        return [v for _, v in self.values]

    def to_json(self) -> str:
        return json.dumps({"ideal": self.ideal, "values": [[k, v] for k, v in self.values]})

    @classmethod
    def from_json(cls, text: str) -> "HilbertTable":
        data = json.loads(text)
        return cls(data["ideal"], [(int(k), int(v)) for k, v in data["values"]])

    def to_text(self) -> str:
        ks = [str(k) for k, _ in self.values]
        hs = [str(v) for _, v in self.values]
        w = max(len(s) for s in ks + hs + ["HF_k"])
        head = "k".ljust(5) + "| " + " ".join(s.rjust(w) for s in ks)
        rule = "-" * len(head)
        row = "HF_k".ljust(5) + "| " + " ".join(s.rjust(w) for s in hs)
        return f"Hilbert function of I = {self.ideal}\n{head}\n{rule}\n{row}"


def hilbert_table(I: Union[MonomialIdeal, IdealGens], kmax: int) -> HilbertTable:
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    if isinstance(I, MonomialIdeal):
        return HilbertTable(str(I), [(k, hf_monomial(I, k)) for k in range(kmax + 1)])
    values = []
    vanished = False
    for k in range(kmax + 1):
        # I generated in degree d: once I_k is everything, so is every I_j, j > k
        v = 0 if vanished else hf_poly(I, k)
        vanished = vanished or (v == 0 and k >= I.d)
        values.append((k, v))
    return HilbertTable(str(I), values)
