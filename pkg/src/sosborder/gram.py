"""Gram spectrahedra: f = v^T Q v for v the lex-ordered degree-d monomials.

The affine space of symmetric Q with v^T Q v = f is ``Q0 + span(B_1..B_s)``
where the ``B_j`` span the kernel of the expansion map.  Everything here is
exact; the numeric mirror (float matrices) is produced on demand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Sequence, Union

import numpy as np

from .core import (
    DegreeError,
    DimensionError,
    Polynomial,
    enumerate_monomials,
    format_monomial,
    monomial_index,
    nullspace,
    rank,
)


class NotPSDError(ValueError):
    """Matrix has a negative eigenvalue beyond the tolerance."""


@dataclass(frozen=True)
class SosDecomposition:
    """``f = sum_i w_i * p_i^2``; weights default to 1."""

    n: int
    d: int
    polys: tuple
    weights: tuple = None

    def __init__(self, polys: Sequence[Polynomial], weights: Sequence | None = None):
        polys = tuple(polys)
        if not polys:
            raise ValueError("empty decomposition")
        n, d = polys[0].n, polys[0].degree
        for p in polys:
            if p.n != n:
                raise DimensionError("decomposition mixes variable counts")
            if p.degree != d:
                raise DegreeError("decomposition mixes degrees")
        if weights is None:
            weights = (Fraction(1),) * len(polys)
        elif len(weights) != len(polys):
            raise ValueError("one weight per polynomial")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "weights", tuple(weights))


@dataclass(frozen=True)
class GramFrame:
    n: int
    d: int
    basis: tuple

    def __init__(self, n: int, d: int):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "basis", tuple(enumerate_monomials(n, d)))

    @property
    def m(self) -> int:
        return len(self.basis)

    def labels(self) -> list:
        return [format_monomial(b) for b in self.basis]


@dataclass
class GramParam:
    frame: GramFrame
    f: Polynomial
    Q0: list
    directions: list

    def numeric(self):
        """(A0, [A_j]) as float arrays."""
        A0 = np.array(self.Q0, dtype=float)
        As = [np.array(B, dtype=float) for B in self.directions]
        return A0, As

    def point(self, coords: Sequence) -> np.ndarray:
        A0, As = self.numeric()
        return A0 + sum((c * A for c, A in zip(coords, As)), np.zeros_like(A0))


def expand_sos(s: SosDecomposition) -> Polynomial:
    total = Polynomial.zero(s.n, 2 * s.d)
    for p, w in zip(s.polys, s.weights):
        total = total + (p * p).scale(w)
    return total


def coefficient_matrix(polys: Sequence[Polynomial]) -> list:
    """Rows: coordinates of each polynomial in its lex monomial frame."""
    return [p.to_vector() for p in polys]


def gram_from_sos(s: SosDecomposition):
    """``Q0 = sum w_i c_i c_i^T``; returns ``(Q0, rank)`` with the exact rank of the ``c_i``."""
    C = coefficient_matrix(s.polys)
    m = len(C[0])
    Q = [[Fraction(0)] * m for _ in range(m)]
    for c, w in zip(C, s.weights):
        nz = [(i, x) for i, x in enumerate(c) if x]
        for i, a in nz:
            row = Q[i]
            wa = w * a
            for j, b in nz:
                row[j] += wa * b
    return Q, rank(C, m)


def quadratic_form(Q, frame: GramFrame) -> Polynomial:
    """Exact ``v^T Q v`` for a rational matrix ``Q``."""
    n, d = frame.n, frame.d
    terms: dict = {}
    for i, a in enumerate(frame.basis):
        for j, b in enumerate(frame.basis):
            x = Q[i][j]
            if x:
                mono = tuple(u + v for u, v in zip(a, b))
                terms[mono] = terms.get(mono, 0) + Fraction(x)
    return Polynomial(n, terms, 2 * d)


def _pairs(frame: GramFrame) -> list:
    return [(i, j) for i in range(frame.m) for j in range(i, frame.m)]


def _sym_from_upper(v: Sequence, m: int, pairs: list) -> list:
    Q = [[Fraction(0)] * m for _ in range(m)]
    for (i, j), x in zip(pairs, v):
        if x:
            Q[i][j] = Q[j][i] = Fraction(x)
    return Q


def expansion_matrix(frame: GramFrame) -> list:
    """Linear map (upper-triangle entries of Q) -> coefficients of v^T Q v."""
    n, d = frame.n, frame.d
    idx = monomial_index(n, 2 * d)
    pairs = _pairs(frame)
    L = [[0] * len(pairs) for _ in range(len(idx))]
    for c, (i, j) in enumerate(pairs):
        mono = tuple(u + v for u, v in zip(frame.basis[i], frame.basis[j]))
        L[idx[mono]][c] = 1 if i == j else 2
    return L


def kernel_directions(frame: GramFrame) -> list:
    """Exact rref-canonical basis of ``{B symmetric : v^T B v = 0}``.

    Dimension is ``m(m+1)/2 - binom(n+2d-1, 2d)``.
    """
    pairs = _pairs(frame)
    L = expansion_matrix(frame)
    return [_sym_from_upper(v, frame.m, pairs) for v in nullspace(L, len(pairs))]


def particular_gram(f: Polynomial, frame: GramFrame) -> list:
    """One rational symmetric Q with v^T Q v = f (first split of each monomial)."""
    m = frame.m
    Q = [[Fraction(0)] * m for _ in range(m)]
    first: dict = {}
    for i, j in _pairs(frame):
        mono = tuple(u + v for u, v in zip(frame.basis[i], frame.basis[j]))
        first.setdefault(mono, (i, j))
    for mono, c in f.terms.items():
        i, j = first[mono]
        if i == j:
            Q[i][i] = c
        else:
            Q[i][j] = Q[j][i] = c / 2
    return Q


def spectrahedron(data: Union[SosDecomposition, Polynomial]) -> GramParam:
    if isinstance(data, SosDecomposition):
        frame = GramFrame(data.n, data.d)
        f = expand_sos(data)
        Q0, _ = gram_from_sos(data)
    else:
        f = data
        if f.degree % 2:
            raise DegreeError(f"odd degree {f.degree} has no Gram matrix")
        frame = GramFrame(f.n, f.degree // 2)
        Q0 = particular_gram(f, frame)
    return GramParam(frame, f, Q0, kernel_directions(frame))


def direction_count(n: int, d: int) -> int:
    m = comb(n + d - 1, d)
    return m * (m + 1) // 2 - comb(n + 2 * d - 1, 2 * d)


# ---------------------------------------------------------------------------
# PSD matrix -> decomposition

def _rational_sqrt(x: Fraction):
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _ldl_decomposition(Q, frame: GramFrame) -> SosDecomposition:
    m = frame.m
    A = [[Fraction(x) for x in row] for row in Q]
    for i in range(m):
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise ValueError("matrix is not symmetric")
    polys, weights = [], []
    while True:
        piv = next((i for i in range(m) if A[i][i] != 0), None)
        if piv is None:
            if any(x for row in A for x in row):
                raise NotPSDError("zero diagonal with nonzero off-diagonal entry")
            break
        a = A[piv][piv]
        if a < 0:
            raise NotPSDError(f"negative pivot {a}")
        row = list(A[piv])
        coeffs = {frame.basis[j]: row[j] / a for j in range(m) if row[j]}
        polys.append(Polynomial(frame.n, coeffs, frame.d))
        weights.append(a)
        nz = [j for j in range(m) if row[j]]
        for i in nz:
            ri = row[i] / a
            Ai = A[i]
            for j in nz:
                Ai[j] -= ri * row[j]
    if not polys:
        return SosDecomposition([Polynomial.zero(frame.n, frame.d)])
    out_p, out_w = [], []
    for p, w in zip(polys, weights):
        r = _rational_sqrt(w)
        if r is not None:
            out_p.append(p.scale(r))
            out_w.append(Fraction(1))
        else:
            out_p.append(p)
            out_w.append(w)
    return SosDecomposition(out_p, out_w)


def sos_from_psd(Q, frame: GramFrame, tol_rank: float = 1e-6) -> SosDecomposition:
    """Squares whose sum is ``v^T Q v``.

    Rational input (nested lists of int/Fraction) is diagonalised by congruence
    and reproduces ``f`` exactly, possibly with rational weights.  Float input
    goes through an eigendecomposition keeping eigenvalues above
    ``tol_rank * max(1, lambda_max)``.
    """
    if isinstance(Q, np.ndarray) and Q.dtype.kind == "f":
        A = 0.5 * (Q + Q.T)
        vals, vecs = np.linalg.eigh(A)
        scale = max(1.0, float(vals[-1]))
        if vals[0] < -tol_rank * scale:
            raise NotPSDError(f"lambda_min = {vals[0]:.3e}")
        polys = []
        for lam, vec in zip(vals, vecs.T):
            if lam > tol_rank * scale:
                c = np.sqrt(lam) * vec
                polys.append(Polynomial(frame.n, {b: Fraction(float(x)) for b, x in zip(frame.basis, c)},
                                        frame.d))
        if not polys:
            polys = [Polynomial.zero(frame.n, frame.d)]
        return SosDecomposition(polys)
    return _ldl_decomposition(Q, frame)


def matrix_to_json(Q, frame: GramFrame) -> str:
    if isinstance(Q, np.ndarray):
        entries = [float(x) for x in Q.ravel()]
    else:
        entries = [str(Fraction(x)) for row in Q for x in row]
    return json.dumps({"basis": frame.labels(), "entries": entries})


def matrix_from_json(text: str):
    """Returns ``(labels, matrix)``; rational strings come back as Fractions."""
    data = json.loads(text)
    labels = data["basis"]
    m = len(labels)
    vals = data["entries"]
    if len(vals) != m * m:
        raise DimensionError("entry count does not match basis size")
    if vals and isinstance(vals[0], str):
        vals = [Fraction(v) for v in vals]
        return labels, [vals[i * m:(i + 1) * m] for i in range(m)]
    return labels, np.array(vals, dtype=float).reshape(m, m)
