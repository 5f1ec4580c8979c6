"""Shared helpers: seeded random forms and the acceptance summary printer."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from sosborder.core import Polynomial, enumerate_monomials

SEED = 20240601

# criterion label -> list of (ok, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def record(label: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.setdefault(label, []).append((bool(ok), detail))
    print(f"[acceptance] {label}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=_order):
        rows = ACCEPTANCE[label]
        ok = all(r[0] for r in rows)
        details = "; ".join(d for _, d in rows if d)
        tr.write_line(f"{label}: {'PASS' if ok else 'FAIL'}  {details}")


def _order(label: str):
    head = label.split()[0]
    num = "".join(ch for ch in head if ch.isdigit())
    return (int(num) if num else 99, label)


def random_form(rng: random.Random, n: int, d: int, density: float = 0.6,
                lo: int = -3, hi: int = 3) -> Polynomial:
    """Nonzero degree-``d`` form with integer coefficients in ``[lo, hi]``."""
    monos = enumerate_monomials(n, d)
    while True:
        terms = {m: rng.randint(lo, hi) for m in monos if rng.random() < density}
        p = Polynomial(n, terms, d)
        if not p.is_zero():
            return p


def linear_substitution(p: Polynomial, A) -> Polynomial:
    """``p(A x)`` for an integer matrix ``A``."""
    n = p.n
    lin = [Polynomial(n, {tuple(int(i == j) for i in range(n)): A[r][j] for j in range(n)}, 1)
           for r in range(n)]
    out = Polynomial.zero(n, p.degree)
    for m, c in p.terms.items():
        term = Polynomial(n, {(0,) * n: Fraction(c)})
        for r, e in enumerate(m):
            for _ in range(e):
                term = term * lin[r]
        out = out + term
    return out


def unimodular(rng: random.Random, n: int):
    """Random integer matrix with determinant 1 (product of elementary moves)."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for col in range(n):
            A[i][col] += c * A[j][col]
    return A


@pytest.fixture
def rng():
    return random.Random(SEED)
