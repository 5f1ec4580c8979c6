"""Small dense SDP machinery over affine symmetric families A0 + sum_j x_j A_j.

Only what the Gram-spectrahedron analyses need:

* ``eigen_sym``: cyclic Jacobi.
* ``max_min_eig``: maximise t subject to A(x) - t I >= 0.
* ``optimize_linear``: maximise <C, A(x)> subject to A(x) >= 0.

Both optimisers are primal log-det barrier path followers.  Newton systems are
solved through a QR factorisation of the scaled directions L^{-1} A_j L^{-T}
instead of forming the Hessian, which squares the condition number.

When A(x) >= 0 has no positive definite point (the interesting case: f on the
boundary of the SOS cone) there is no interior for the barrier.  The phase-1
point of ``max_min_eig`` lies in the relative interior of the spectrahedron,
so its numerical kernel W identifies the minimal face; ``optimize_linear``
then restricts x to the directions with A_j-combinations vanishing on W and
runs the barrier on the compressed matrix V^T A(x) V.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import solve_triangular


class SolverError(RuntimeError):
    """Numerical breakdown inside the barrier method."""


@dataclass
class SdpOptions:
    eps_gap: float = 1e-9
    eps_feas: float = 1e-8
    tol_rank: float = 1e-6
    max_iter: int = 200
    seed: int = 42

    def __post_init__(self):
        for name in ("eps_gap", "eps_feas", "tol_rank"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass
class LmiModel:
    A0: np.ndarray
    As: list = field(default_factory=list)
    objective: np.ndarray | None = None  # None means the lambda_min problem

    def __post_init__(self):
        self.A0 = _sym(np.asarray(self.A0, dtype=float))
        self.As = [_sym(np.asarray(A, dtype=float)) for A in self.As]
        m = self.A0.shape[0]
        for A in self.As:
            if A.shape != (m, m):
                raise ValueError("direction shape mismatch")
        if self.objective is not None:
            self.objective = np.asarray(self.objective, dtype=float)
            if self.objective.shape != (len(self.As),):
                raise ValueError("objective length must equal the number of directions")

    @property
    def m(self) -> int:
        return self.A0.shape[0]

    @property
    def s(self) -> int:
        return len(self.As)

    def stack(self) -> np.ndarray:
        if not self.As:
            return np.zeros((0, self.m, self.m))
        return np.array(self.As)

    def at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not self.As:
            return self.A0.copy()
        return self.A0 + np.tensordot(x, self.stack(), axes=1)


@dataclass
class SdpOutcome:
    status: str  # "optimal" | "infeasible" | "max_iter"
    lam: np.ndarray
    value: float
    Q: np.ndarray
    eigenvalues: np.ndarray
    dual_bound: float = float("nan")
    iterations: int = 0
    message: str = ""
    path: list = field(default_factory=list, repr=False, compare=False)

    def to_json(self) -> str:
        d = asdict(self)
        d.pop("path")
        d["lam"] = [float(v) for v in self.lam]
        d["Q"] = [[float(v) for v in row] for row in self.Q]
        d["eigenvalues"] = [float(v) for v in self.eigenvalues]
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "SdpOutcome":
        d = json.loads(text)
        d["lam"] = np.array(d["lam"], dtype=float)
        d["Q"] = np.array(d["Q"], dtype=float)
        d["eigenvalues"] = np.array(d["eigenvalues"], dtype=float)
        return cls(**d)


def _sym(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.T)


# ---------------------------------------------------------------------------
# eigenvalues

def eigen_sym(A: np.ndarray, sweeps: int = 60):
    """Cyclic Jacobi eigendecomposition; values ascending, vectors as columns."""
    A = _sym(np.array(A, dtype=float))
    m = A.shape[0]
    V = np.eye(m)
    if m < 2:
        return np.diag(A).copy(), V
    thresh = 1e-13 * max(np.abs(A).max(), np.finfo(float).tiny)
    for _ in range(sweeps):
        off = np.abs(A - np.diag(np.diag(A))).max()
        if off <= thresh:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if abs(apq) <= thresh * 1e-3:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    vals = np.diag(A).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], V[:, order]


def numeric_rank(Q: np.ndarray, tol_rank: float = 1e-6) -> int:
    """Eigenvalues above ``tol_rank * max(1, lambda_max)``."""
    vals = eigen_sym(Q)[0]
    if vals.size == 0:
        return 0
    return int(np.sum(vals > tol_rank * max(1.0, vals[-1])))


# ---------------------------------------------------------------------------
# barrier core

def _chol(S: np.ndarray):
    try:
        return np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        return None


def _barrier(F0, F, c, x, opts: SdpOptions, mu0: float = 1.0, shrink: float = 0.2,
             guard: float = 1e8, path: list | None = None):
    """Maximise c.x + mu*logdet(F0 + sum x_j F_j) along a decreasing mu.

    ``x`` must be strictly feasible.  Returns (x, mu, iterations, message).
    Centred iterates are appended to ``path`` as ``(mu, x)`` when given.
    """
    m = F0.shape[0]
    k = len(F)
    x = np.array(x, dtype=float)
    if k == 0:
        return x, 0.0, 0, ""
    mu = mu0
    iters = 0

    def logdet(L):
        return 2.0 * np.log(np.diag(L)).sum()

    while True:
        for _ in range(100):
            S = F0 + np.tensordot(x, F, axes=1)
            L = _chol(S)
            if L is None:
                raise SolverError("iterate left the feasible region")
            iters += 1
            if iters > opts.max_iter * 10:
                return x, mu, iters, "max_iter"
            Li = solve_triangular(L, np.eye(m), lower=True)
            G = Li @ F @ Li.T
            Gv = G.reshape(k, m * m).T
            g = c / mu + np.einsum("kaa->k", G)
            Qf, R = np.linalg.qr(Gv)
            diag = np.abs(np.diag(R))
            if Gv.shape[0] < k or diag.min() <= 1e-14 * max(diag.max(), 1e-300):
                # dependent scaled directions: fall back to least squares
                H = Gv.T @ Gv
                step = np.linalg.lstsq(H, g, rcond=None)[0]
                if np.linalg.norm(H @ step - g) > 1e-8 * max(np.linalg.norm(g), 1.0):
                    # objective grows along a flat direction of the barrier
                    return x, mu, iters, "diverged"
            else:
                y = solve_triangular(R, g, trans="T", lower=False)
                step = solve_triangular(R, y, lower=False)
            dec = float(g @ step)
            if dec < 0:
                raise SolverError("Newton direction is not an ascent direction")
            if dec / 2.0 < 1e-10:
                break
            phi0 = c @ x / mu + logdet(L)
            alpha = 1.0
            while alpha > 1e-12:
                xn = x + alpha * step
                Ln = _chol(F0 + np.tensordot(xn, F, axes=1))
                if Ln is not None and c @ xn / mu + logdet(Ln) >= phi0 + 0.25 * alpha * dec:
                    break
                alpha *= 0.5
            else:
                break
            x = xn
            if np.linalg.norm(x) > guard:
                return x, mu, iters, "diverged"
        if path is not None:
            path.append((mu, x.copy()))
        if m * mu <= opts.eps_gap:
            return x, mu, iters, ""
        mu = max(mu * shrink, opts.eps_gap / m * 0.999)


def _outcome(model: LmiModel, x, value, dual, iters, message, opts) -> SdpOutcome:
    Q = model.at(x)
    vals = np.linalg.eigvalsh(Q)
    if message == "diverged":
        status = "max_iter"
    elif message == "max_iter":
        status = "max_iter"
    else:
        status = "optimal"
    return SdpOutcome(status, np.asarray(x, dtype=float), float(value), Q, vals, float(dual),
                      iters, message)


def max_min_eig(model: LmiModel, opts: SdpOptions | None = None) -> SdpOutcome:
    """Maximise t with A(x) - t I >= 0; ``value`` is the primal t, ``dual_bound`` >= t*."""
    opts = opts or SdpOptions()
    m, s = model.m, model.s
    F = np.concatenate([model.stack(), -np.eye(m)[None]], axis=0)
    c = np.zeros(s + 1)
    c[-1] = 1.0
    t0 = float(np.linalg.eigvalsh(model.A0)[0]) - 1.0
    x0 = np.concatenate([np.zeros(s), [t0]])
    scale = max(1.0, float(np.abs(model.A0).max()))
    path: list = []
    x, mu, iters, msg = _barrier(model.A0, F, c, x0, opts, mu0=scale, path=path)
    size = m
    if msg == "diverged" and s:
        # unbounded family: redo inside the ball |lambda| <= R
        F0b, Fb = _ball(model.A0, F, s, 1e4 * scale)
        path = []
        x, mu, it2, msg = _barrier(F0b, Fb, c, x0, opts, mu0=scale, path=path)
        iters += it2
        size = F0b.shape[0]
    lam, t = x[:s], x[s]
    out = _outcome(model, lam, t, t + size * mu, iters, msg, opts)
    out.path = [(u, z[:s]) for u, z in path]
    return out


def _ball(F0: np.ndarray, F: np.ndarray, s: int, radius: float):
    """Append the block [[R, x^T], [x, R I]] >= 0 to the first ``s`` coordinates."""
    m, k = F0.shape[0], len(F)
    b = s + 1
    F0b = np.zeros((m + b, m + b))
    F0b[:m, :m] = F0
    F0b[m:, m:] = radius * np.eye(b)
    Fb = np.zeros((k, m + b, m + b))
    Fb[:, :m, :m] = F
    for j in range(s):
        Fb[j, m, m + 1 + j] = Fb[j, m + 1 + j, m] = 1.0
    return F0b, Fb


# ---------------------------------------------------------------------------
# linear objectives

@dataclass
class Face:
    """Affine slice x = x0 + N y on which A(x) keeps the kernel W.

    ``x0`` is a relative-interior point of the spectrahedron (numerically).
    """

    x0: np.ndarray
    N: np.ndarray  # s x p
    V: np.ndarray  # m x r, range of the face
    W: np.ndarray  # m x (m - r), common kernel
    phase1: SdpOutcome
    rounds: int = 0

    @property
    def dim(self) -> int:
        return self.N.shape[1]


def _orth_complement(V: np.ndarray, m: int) -> np.ndarray:
    if V.shape[1] == 0:
        return np.eye(m)
    q, _ = np.linalg.qr(V, mode="complete")
    return q[:, V.shape[1]:]


def _decaying(sub: LmiModel, out: SdpOutcome, cut: float, ratio: float = 0.5) -> int:
    """How many eigenvalues of the centred point are heading to zero.

    Along the central path a vanishing eigenvalue decays like mu (strict
    complementarity) or like a fractional power of mu (without it), while
    eigenvalues of the limit point stay put.  Comparing the final spectrum
    with one taken at a 100x larger mu separates the two groups even when the
    slow ones are still far above ``cut``.
    """
    vals = np.linalg.eigvalsh(sub.at(out.lam))
    zero = vals <= cut
    if out.path:
        mu_end = out.path[-1][0]
        earlier = [z for u, z in out.path if u >= 100.0 * mu_end]
        if earlier:
            prev = np.linalg.eigvalsh(sub.at(earlier[-1]))
            zero |= (prev > cut) & (vals < ratio * prev)
    # the decaying group sits at the bottom of the spectrum
    k = 0
    while k < len(vals) and zero[k]:
        k += 1
    return k


def _polish(model: LmiModel, x: np.ndarray, k: int, scale: float, iters: int = 40):
    """Newton on x -> W^T A(x) W = 0 for W the k lowest eigenvectors.

    Converges quadratically while the spectral gap above the k-th eigenvalue
    is large; returns (x, converged).
    """
    Fs = model.stack()
    iu = np.triu_indices(k)
    best = None
    for _ in range(iters):
        vals, vecs = np.linalg.eigh(model.at(x))
        err = float(np.abs(vals[:k]).max())
        if best is None or err < best[1]:
            best = (x.copy(), err)
        if err <= 1e-13 * scale:
            break
        W = vecs[:, :k]
        M = (W.T @ Fs @ W)[:, iu[0], iu[1]].T
        rhs = -(W.T @ model.at(x) @ W)[iu]
        # redundant equations at the solution: truncate tiny singular values
        dx = np.linalg.lstsq(M, rhs, rcond=1e-8)[0]
        x = x + dx
    x, err = best
    vals = np.linalg.eigvalsh(model.at(x))
    gap_ok = k == len(vals) or vals[k] > 1e3 * max(err, 1e-16 * scale)
    return x, err <= 1e-10 * scale and gap_ok


def _kernel_slice(model: LmiModel, W: np.ndarray) -> np.ndarray:
    """Orthonormal basis of {y : sum_j y_j A_j W = 0}."""
    Fs = model.stack()
    M = (Fs @ W).reshape(model.s, -1).T
    if M.size == 0:
        return np.eye(model.s)
    u, sv, vt = np.linalg.svd(M, full_matrices=True)
    # near a face without strict complementarity the kernel is only known
    # to about sqrt(eps); directions with tiny response count as tangent
    rk = int(np.sum(sv > 1e-3 * max(sv[0], 1.0))) if sv.size else 0
    return vt[rk:].T


def _refine_face(model: LmiModel, anchor: np.ndarray, W: np.ndarray, N: np.ndarray,
                 scale: float, iters: int = 80):
    """Alternate W <- common kernel of A(anchor) and the face directions,
    N <- directions annihilating W.

    ``anchor`` must be a feasible point; the spectrahedron then lies in
    ``anchor + span(N)`` and the true kernel is a fixed point.  Returns the
    refined (W, N) or the inputs when the iteration does not settle.
    """
    k = W.shape[1]
    if k == 0 or N.shape[1] == 0:
        return W, N
    Fs = model.stack()
    Aa = model.at(anchor)
    best = (W, N, np.inf)
    for _ in range(iters):
        D = np.tensordot(N.T, Fs, axes=1)
        sv, vt = np.linalg.svd(np.concatenate([Aa, *D], axis=0))[1:]
        res = float(sv[-k])
        W = vt[-k:].T
        N = _kernel_slice(model, W)
        if res < best[2]:
            best = (W, N, res)
        if res <= 1e-14 * scale or N.shape[1] == 0:
            break
    W, N, res = best
    return W, N


def minimal_face(model: LmiModel, opts: SdpOptions | None = None,
                 phase1: SdpOutcome | None = None) -> Face:
    """Numerical facial reduction starting from the phase-1 point.

    Each round reads off the vanishing eigenspace of the current centred
    point, polishes x so that A(x) annihilates it to working precision,
    sharpens the kernel against a feasible anchor (A0 itself whenever it is
    PSD, as for a Gram matrix built from squares), restricts to the
    directions that keep the kernel and re-centres on the compressed face.
    Stops once the compressed face has a positive definite point or no
    freedom is left.
    """
    opts = opts or SdpOptions()
    phase1 = phase1 or max_min_eig(model, opts)
    m, s = model.m, model.s
    x = phase1.lam.copy()
    lmax = float(np.linalg.eigvalsh(model.at(x))[-1])
    scale = max(1.0, lmax)
    cut = opts.tol_rank * scale
    a0_psd = float(np.linalg.eigvalsh(model.A0)[0]) >= -1e-12 * scale
    N, V, W = np.eye(s), np.eye(m), np.zeros((m, 0))
    sub, out = model, phase1
    rounds = 0
    while out.dual_bound <= cut and rounds < m:
        rounds += 1
        kc = _decaying(sub, out, cut)
        if kc == 0:
            break
        k = W.shape[1] + kc
        xp, ok = _polish(model, x, k, scale)
        if not ok:
            # fall back to the plain threshold split
            xp = x
            vals = np.linalg.eigvalsh(model.at(x))
            k = int(np.sum(vals <= cut))
            if k <= W.shape[1]:
                break
        W = np.linalg.eigh(model.at(xp))[1][:, :k]
        N = _kernel_slice(model, W)
        anchor = np.zeros(s) if a0_psd else xp
        W, N = _refine_face(model, anchor, W, N, scale)
        V = _orth_complement(W, m)
        x = anchor + N @ (N.T @ (xp - anchor))
        if N.shape[1] == 0 or V.shape[1] == 0:
            break
        D = np.tensordot(N.T, model.stack(), axes=1)
        sub = LmiModel(V.T @ model.at(x) @ V, list(V.T @ D @ V))
        out = max_min_eig(sub, opts)
        x = x + N @ out.lam
    return Face(x, N, V, W, phase1, rounds)


def optimize_linear(model: LmiModel, C: np.ndarray, opts: SdpOptions | None = None,
                    face: Face | None = None) -> SdpOutcome:
    """Maximise <C, A(x)> over A(x) >= 0 (after a phase-1 feasibility solve)."""
    opts = opts or SdpOptions()
    C = _sym(np.asarray(C, dtype=float))
    if face is None:
        phase1 = max_min_eig(model, opts)
        if phase1.status != "optimal":
            return phase1
        if phase1.dual_bound < -opts.eps_feas:
            return SdpOutcome("infeasible", phase1.lam, float("nan"), phase1.Q,
                              phase1.eigenvalues, phase1.dual_bound, phase1.iterations,
                              "no PSD point in the family")
        face = minimal_face(model, opts, phase1)
    x0, N, V = face.x0, face.N, face.V
    iters = face.phase1.iterations
    base = float(np.sum(C * model.at(x0)))
    if N.shape[1] == 0 or not np.any(C):
        return _outcome(model, x0, base, base, iters, "", opts)
    Fs = model.stack()
    D = np.tensordot(N.T, Fs, axes=1)  # p x m x m
    cvec = np.einsum("ab,kab->k", C, D)
    if face.W.shape[1] == 0:
        F0r, Fr = model.at(x0), D
    else:
        F0r = V.T @ model.at(x0) @ V
        Fr = np.einsum("ai,kab,bj->kij", V, D, V)
    scale = max(1.0, float(np.abs(cvec).max()))
    y, mu, it2, msg = _barrier(_sym(F0r), Fr, cvec, np.zeros(N.shape[1]), opts, mu0=scale)
    x = x0 + N @ y
    value = base + float(cvec @ y)
    return _outcome(model, x, value, value + F0r.shape[0] * mu, iters + it2, msg, opts)
