"""Boundary, positivity, rank and uniqueness analyses of Gram spectrahedra.

Two independent routes to uniqueness live here.  The numeric one
(``analyze``) probes the spectrahedron with the barrier solver.  The exact
one (``certificate_search``) builds a linear functional ``l`` on degree-2d
forms with ``l(p_i q) = 0`` for every generator and every degree-d monomial;
if its moment matrix is PSD with kernel exactly ``span(p_i)`` then every
Gram matrix ``Q`` of ``f`` satisfies ``<Q_l, Q> = l(f) = 0``, forcing
``range(Q)`` into ``span(p_i)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .core import (
    Polynomial,
    enumerate_monomials,
    format_monomial,
    monomial_index,
    nullspace,
    rref,
    same_row_space,
)
from .gram import GramParam, SosDecomposition, expand_sos, spectrahedron
from .sdp import (
    LmiModel,
    SdpOptions,
    SolverError,
    max_min_eig,
    minimal_face,
    numeric_rank,
    optimize_linear,
)

TOL_BOUNDARY = 1e-6
TOL_WIDTH = 1e-6
TOL_POSITIVE = 1e-6


class CertificateError(RuntimeError):
    """No exact dual certificate could be produced."""


class SearchFailedError(CertificateError):
    """No probe gave a one-dimensional functional space."""


class CertificateInvalidError(CertificateError):
    """The summed functional has the wrong kernel."""

    def __init__(self, message: str, kernel: list, expected: list):
        super().__init__(message)
        self.kernel = kernel
        self.expected = expected


# ---------------------------------------------------------------------------
# exact functionals

def _product_matrix(polys: Sequence[Polynomial], n: int, d: int) -> list:
    idx = monomial_index(n, 2 * d)
    rows = []
    for p in polys:
        for q in enumerate_monomials(n, d):
            row = [0] * len(idx)
            for mono, c in p.terms.items():
                row[idx[tuple(a + b for a, b in zip(mono, q))]] = c
            rows.append(row)
    return rows


def functional_space(polys: Sequence[Polynomial], n: int, d: int) -> list:
    """Basis of the functionals vanishing on every ``p_i * q``, ``deg q = d``.

    Vectors are indexed by the lex-ordered degree-2d monomials.
    """
    for p in polys:
        if p.n != n or p.degree != d:
            raise ValueError("generators must be degree-d forms in n variables")
    ncols = len(enumerate_monomials(n, 2 * d))
    return nullspace(_product_matrix(polys, n, d), ncols)


def moment_matrix(l: Sequence, n: int, d: int) -> list:
    """``(Q_l)[a][b] = l(x^(a+b))`` over the degree-d frame."""
    idx = monomial_index(n, 2 * d)
    basis = enumerate_monomials(n, d)
    if len(l) != len(idx):
        raise ValueError("functional length does not match the degree-2d basis")
    return [[Fraction(l[idx[tuple(u + v for u, v in zip(a, b))]]) for b in basis]
            for a in basis]


def char_poly(Q: Sequence[Sequence]) -> list:
    """Coefficients ``c_0..c_m`` of ``det(xI - Q)`` (Faddeev-LeVerrier, exact)."""
    m = len(Q)
    A = [[Fraction(x) for x in row] for row in Q]
    c = [Fraction(0)] * (m + 1)
    c[m] = Fraction(1)
    M = [[Fraction(0)] * m for _ in range(m)]
    for k in range(1, m + 1):
        # M <- A M + c_{m-k+1} I
        AM = [[sum((A[i][t] * M[t][j] for t in range(m) if A[i][t] and M[t][j]), Fraction(0))
               for j in range(m)] for i in range(m)]
        for i in range(m):
            AM[i][i] += c[m - k + 1]
        M = AM
        tr = sum((A[i][t] * M[t][i] for i in range(m) for t in range(m) if A[i][t] and M[t][i]),
                 Fraction(0))
        c[m - k] = -tr / k
    return c


def psd_exact(Q: Sequence[Sequence]) -> bool:
    """Exact PSD test: every ``(-1)^(m-i) c_i`` of the characteristic polynomial is >= 0."""
    m = len(Q)
    for i in range(m):
        for j in range(i):
            if Fraction(Q[i][j]) != Fraction(Q[j][i]):
                raise ValueError("matrix is not symmetric")
    c = char_poly(Q)
    return all((-1) ** (m - i) * c[i] >= 0 for i in range(m + 1))


@dataclass
class DualCertificate:
    n: int
    d: int
    l: list  # Fractions over the degree-2d basis
    Q_l: list
    kernel: list  # rref rows
    psd_proved: bool
    probes: list = field(default_factory=list)
    char_coeffs: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n, "d": self.d,
            "l": [str(x) for x in self.l],
            "Q_l": [[str(x) for x in row] for row in self.Q_l],
            "kernel": [[str(x) for x in row] for row in self.kernel],
            "psd_proved": self.psd_proved,
            "probes": [format_monomial(p) for p in self.probes],
        })

    @classmethod
    def from_json(cls, text: str) -> "DualCertificate":
        from .core import parse_poly
        data = json.loads(text)
        n, d = data["n"], data["d"]
        probes = [parse_poly(p, n).leading_monomial() for p in data["probes"]]
        return cls(n, d, [Fraction(x) for x in data["l"]],
                   [[Fraction(x) for x in row] for row in data["Q_l"]],
                   [[Fraction(x) for x in row] for row in data["kernel"]],
                   data["psd_proved"], probes)

    def transcript(self) -> str:
        basis = enumerate_monomials(self.n, 2 * self.d)
        lines = [f"functional on degree-{2 * self.d} forms in {self.n} variables",
                 "probes: " + ", ".join(format_monomial(p) for p in self.probes),
                 "nonzero values l(x^a):"]
        lines += [f"  l({format_monomial(b)}) = {x}" for b, x in zip(basis, self.l) if x]
        coeffs = self.char_coeffs or char_poly(self.Q_l)
        m = len(self.Q_l)
        signs = ["+" if (-1) ** (m - i) * c > 0 else "0" if c == 0 else "-"
                 for i, c in enumerate(coeffs)]
        lines.append("signs of (-1)^(m-i) c_i, i = 0..m: " + " ".join(signs))
        lines.append(f"moment matrix PSD: {self.psd_proved}")
        lines.append(f"kernel dimension: {len(self.kernel)}")
        return "\n".join(lines)


def certificate_search(polys: Sequence[Polynomial], probes: Sequence | None = None
                       ) -> DualCertificate:
    """Sum of sign-normalised one-dimensional functionals, one per useful probe."""
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one generator")
    n, d = polys[0].n, polys[0].degree
    if probes is None:
        probes = [tuple(d if i == j else 0 for j in range(n)) for i in range(n)]
    total = None
    used = []
    for probe in probes:
        space = functional_space(polys + [Polynomial.monomial(tuple(probe))], n, d)
        if len(space) != 1:
            continue
        for sign in (1, -1):
            l = [sign * Fraction(x) for x in space[0]]
            if psd_exact(moment_matrix(l, n, d)):
                break
        else:
            continue
        total = l if total is None else [a + b for a, b in zip(total, l)]
        used.append(tuple(probe))
    if total is None:
        raise SearchFailedError("no probe gives a one-dimensional PSD functional")
    Q = moment_matrix(total, n, d)
    m = len(Q)
    kernel = nullspace(Q, m)
    gens = [p.to_vector() for p in polys]
    if not same_row_space(kernel, gens, m):
        expected, _, r = rref(gens, m)
        raise CertificateInvalidError(
            f"kernel has dimension {len(kernel)}, generators span {r}",
            kernel, expected[:r])
    coeffs = char_poly(Q)
    psd = all((-1) ** (m - i) * c >= 0 for i, c in enumerate(coeffs))
    R, _, r = rref(kernel, m)
    return DualCertificate(n, d, total, Q, R[:r], psd, used, coeffs)


# ---------------------------------------------------------------------------
# numerics

def _poly_arrays(f: Polynomial):
    items = list(f.terms.items())
    E = np.array([m for m, _ in items], dtype=float).reshape(len(items), f.n)
    c = np.array([float(v) for _, v in items])
    return E, c


def _eval_grad(E, c, X):
    """Values and gradients of sum_t c_t x^E_t at the rows of X."""
    P = X[:, None, :] ** E[None]  # R x T x n
    mono = P.prod(axis=2)
    vals = mono @ c
    R, T, n = P.shape
    grads = np.zeros((R, n))
    for i in range(n):
        e = E[:, i]
        Pi = P.copy()
        Pi[:, :, i] = np.where(e > 0, X[:, None, i] ** np.maximum(e - 1, 0), 0.0)
        grads[:, i] = (Pi.prod(axis=2) * e[None]) @ c
    return vals, grads


def strict_positivity(f: Polynomial, R: int = 64, seed: int = 42, iters: int = 400) -> float:
    """Estimated minimum of ``f`` on the unit sphere.

    Multistart projected gradient with per-start backtracking; deterministic
    for a given seed.
    """
    if f.degree % 2:
        raise ValueError("odd degree forms change sign on the sphere")
    if f.is_zero():
        return 0.0
    E, c = _poly_arrays(f)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((R, f.n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    step = np.full(R, 0.1)
    vals, grads = _eval_grad(E, c, X)
    live = np.ones(R, dtype=bool)
    for _ in range(iters):
        g = grads - np.sum(grads * X, axis=1, keepdims=True) * X
        live &= np.linalg.norm(g, axis=1) > 1e-12 * max(1.0, float(np.abs(c).max()))
        if not live.any():
            break
        todo = live.copy()
        Y, nv, ng = X.copy(), vals.copy(), grads.copy()
        while todo.any():
            idx = np.flatnonzero(todo)
            Z = X[idx] - step[idx, None] * g[idx]
            Z /= np.linalg.norm(Z, axis=1, keepdims=True)
            zv, zg = _eval_grad(E, c, Z)
            good = zv <= vals[idx] - 1e-4 * step[idx] * np.sum(g[idx] ** 2, axis=1)
            Y[idx[good]], nv[idx[good]], ng[idx[good]] = Z[good], zv[good], zg[good]
            todo[idx[good]] = False
            step[idx[~good]] *= 0.5
            dead = todo & (step < 1e-10)
            live &= ~dead
            todo &= ~dead
        # starts that stopped making progress are retired
        progress = vals - nv > 1e-15 * np.maximum(1.0, np.abs(vals))
        X, vals, grads = Y, nv, ng
        step = np.where(live, np.minimum(step * 2.0, 1.0), step)
        live &= progress
    return float(vals.min())


def _model(param: GramParam) -> LmiModel:
    A0, As = param.numeric()
    return LmiModel(A0, As)


def _random_objective(rng: np.random.Generator, m: int) -> np.ndarray:
    C = rng.standard_normal((m, m))
    return 0.5 * (C + C.T)


@dataclass
class RankProbe:
    rank: int
    point_ranks: list
    average: np.ndarray


def rank_probe(model: LmiModel, R: int, opts: SdpOptions, face=None) -> RankProbe:
    """Average the relative-interior point with ``R`` seeded linear optima."""
    face = face or minimal_face(model, opts)
    rng = np.random.default_rng(opts.seed)
    points = [model.at(face.x0)]
    for _ in range(R):
        out = optimize_linear(model, _random_objective(rng, model.m), opts, face)
        if out.status == "optimal":
            points.append(out.Q)
    avg = sum(points) / len(points)
    ranks = [numeric_rank(Q, opts.tol_rank) for Q in points]
    return RankProbe(numeric_rank(avg, opts.tol_rank), ranks, avg)


def max_rank_estimate(param: GramParam, R: int = 8, opts: SdpOptions | None = None,
                      face=None) -> int:
    opts = opts or SdpOptions()
    return rank_probe(_model(param), R, opts, face).rank


@dataclass
class SpectraReport:
    f: Polynomial
    t_star: float
    on_boundary: bool | None  # None: numerically ambiguous
    sphere_min: float
    strictly_positive: bool
    max_rank: int | None
    unique_point: bool | None
    widths: list  # [min, max] of <B_j, Q> per direction
    point_ranks: list = field(default_factory=list)
    face_dim: int = 0
    seed: int = 42
    status: str = "optimal"

    def verdict(self) -> dict:
        return {"on_boundary": self.on_boundary, "strictly_positive": self.strictly_positive,
                "max_rank": self.max_rank, "unique_point": self.unique_point}

    def to_json(self) -> str:
        from .core import format_poly
        return json.dumps({
            "f": format_poly(self.f), "t_star": self.t_star, "on_boundary": self.on_boundary,
            "sphere_min": self.sphere_min, "strictly_positive": self.strictly_positive,
            "max_rank": self.max_rank, "unique_point": self.unique_point,
            "widths": self.widths, "point_ranks": self.point_ranks,
            "face_dim": self.face_dim, "seed": self.seed, "status": self.status})

    @classmethod
    def from_json(cls, text: str) -> "SpectraReport":
        from .core import parse_poly
        data = json.loads(text)
        data["f"] = parse_poly(data["f"])
        return cls(**data)

    def to_text(self) -> str:
        def show(v):
            return "ambiguous" if v is None else str(v)
        span = max((hi - lo for lo, hi in self.widths), default=0.0)
        return "\n".join([
            f"t_star            {self.t_star:.3e}",
            f"on_boundary       {show(self.on_boundary)}",
            f"sphere_min        {self.sphere_min:.6g}",
            f"strictly_positive {self.strictly_positive}",
            f"max_rank          {show(self.max_rank)}",
            f"unique_point      {show(self.unique_point)}",
            f"face_dim          {self.face_dim}",
            f"largest width     {span:.3e}",
            f"seed              {self.seed}",
        ])


def _widths(model: LmiModel, face, opts: SdpOptions) -> list:
    Q0 = model.at(face.x0)
    Bs = model.stack()
    out = []
    for B in Bs:
        base = float(np.sum(B * Q0))
        if face.dim == 0:
            out.append([base, base])
            continue
        g = np.einsum("ab,kab->k", B, np.tensordot(face.N.T, Bs, axes=1))
        if not np.any(np.abs(g) > 1e-12):
            out.append([base, base])
            continue
        hi = optimize_linear(model, B, opts, face)
        lo = optimize_linear(model, -B, opts, face)
        out.append([float(-lo.value), float(hi.value)])
    return out


def analyze(data: Union[SosDecomposition, Polynomial], opts: SdpOptions | None = None,
            restarts: int = 8, tol_boundary: float = TOL_BOUNDARY,
            tol_width: float = TOL_WIDTH, positivity_starts: int = 64) -> SpectraReport:
    opts = opts or SdpOptions()
    param = spectrahedron(data)
    f = param.f
    model = _model(param)
    phase1 = max_min_eig(model, opts)
    if phase1.status != "optimal":
        raise SolverError(f"phase 1 stopped: {phase1.message or phase1.status}")
    t_star = float(phase1.dual_bound)
    if abs(t_star) <= tol_boundary:
        on_boundary = True
    elif t_star > tol_boundary:
        on_boundary = False
    else:
        on_boundary = None
    sphere_min = strict_positivity(f, positivity_starts, opts.seed)
    positive = sphere_min > TOL_POSITIVE
    if t_star < -tol_boundary:
        # no PSD Gram matrix at all: f is not a sum of squares
        return SpectraReport(f, t_star, False, sphere_min, positive, None, None, [],
                             seed=opts.seed, status="infeasible")
    face = minimal_face(model, opts, phase1)
    probe = rank_probe(model, restarts, opts, face)
    widths = _widths(model, face, opts)
    unique = all(hi - lo <= tol_width for lo, hi in widths)
    return SpectraReport(f, t_star, on_boundary, sphere_min, positive, probe.rank, unique,
                         widths, probe.point_ranks, face.dim, opts.seed)
