"""Extremal monomials, divisor counts and the thresholds N(n, d, k).

For ``d <= k <= n(d-1)`` write ``k = q(d-1) + r`` with ``0 <= r < d-1``.  The
monomial ``x1^(d-1) ... xq^(d-1) * x_{q+1}^r`` has the fewest degree-``d``
divisors among degree-``k`` monomials avoiding every ``xi^d``; ``C`` counts
them and ``N = dim H_{n,d} - C + 1`` is the number of degree-``d`` forms
(pure powers included) that forces ``I_k`` to be everything.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

from .core import divides, enumerate_monomials, format_monomial
from .ideals import MonomialIdeal, hf_monomial


class DomainError(ValueError):
    """Parameters outside the range where the formulas are defined."""


@dataclass(frozen=True)
class BoundData:
    n: int
    d: int
    k: int
    q: int
    r: int
    extremal: tuple
    C: int
    N: int


def _check(n: int, d: int, k: int) -> None:
    if n < 1:
        raise DomainError("n must be positive")
    if d < 2:
        # d = 1 puts every variable in the ideal; nothing to bound
        raise DomainError("d must be at least 2")
    if not d <= k <= n * (d - 1):
        raise DomainError(f"k={k} outside [{d}, {n * (d - 1)}]")


def bound_data(n: int, d: int, k: int) -> BoundData:
    _check(n, d, k)
    q, r = divmod(k, d - 1)
    exps = [d - 1] * q + ([r] if q < n else []) + [0] * n
    # k = n(d-1) gives q = n, r = 0: the x_{q+1} factor disappears
    extremal = tuple(exps[:n])
    C = comb(q + d, d) - comb(q + d - r - 1, q) - q
    N = comb(n + d - 1, d) - C + 1
    return BoundData(n, d, k, q, r, extremal, C, N)


def divisor_count_oracle(m: tuple, d: int) -> int:
    """Brute force: how many degree-``d`` monomials divide ``m``."""
    if d > sum(m):
        raise ValueError("d exceeds the degree of m")
    return sum(1 for u in enumerate_monomials(len(m), d) if divides(u, m))


def witness_ideal(n: int, d: int, k: int) -> MonomialIdeal:
    """The ``N - 1`` degree-``d`` monomials not dividing the extremal monomial.

    ``HF_k`` of this ideal is positive, showing ``N`` cannot be lowered.
    """
    b = bound_data(n, d, k)
    gens = [u for u in enumerate_monomials(n, d) if not divides(u, b.extremal)]
    return MonomialIdeal(n, gens)


def hf_identity_check(n: int, d: int, k: int) -> bool:
    """Check ``N(n,d,k) = HF_k(<x1^d..xn^d>) + n`` for ``k`` above ``max(n(d-1)-d, d)``."""
    lo = max(n * (d - 1) - d, d)
    if d < 2 or not lo < k <= n * (d - 1):
        raise DomainError(f"k={k} outside ({lo}, {n * (d - 1)}]")
    return bound_data(n, d, k).N == hf_monomial(MonomialIdeal.powers(n, d), k) + n


# Published lower/upper bounds for the Pythagoras number p(n, 2d); data only.
PYTHAGORAS = {
    (3, 6): (4, 4),
    (4, 4): (5, 5),
    (4, 6): (8, 11),
    (5, 4): (7, 11),
    (6, 4): (11, 15),
}

TABLE_CASES = [(3, 6), (4, 4), (4, 6), (5, 4), (6, 4)]


@dataclass(frozen=True)
class TableRow:
    n: int
    deg: int  # 2d
    N_minus_1: int
    dim_H: int
    p_lower: int | None
    p_upper: int | None


def table_N(cases=TABLE_CASES) -> list:
    rows = []
    for n, deg in cases:
        if deg % 2:
            raise DomainError(f"degree {deg} is odd")
        d = deg // 2
        b = bound_data(n, d, deg)
        lo, hi = PYTHAGORAS.get((n, deg), (None, None))
        rows.append(TableRow(n, deg, b.N - 1, comb(n + d - 1, d), lo, hi))
    return rows


def table_to_text(rows: list) -> str:
    header = ["n", "2d", "N(n,d,2d)-1", "dim H_{n,d}", "p(n,2d) >=", "p(n,2d) <="]
    body = [[str(r.n), str(r.deg), str(r.N_minus_1), str(r.dim_H),
             "" if r.p_lower is None else str(r.p_lower),
             "" if r.p_upper is None else str(r.p_upper)] for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header)]
    fmt = lambda cells: " | ".join(c.rjust(w) for c, w in zip(cells, widths))
    lines = [fmt(header), "-+-".join("-" * w for w in widths)] + [fmt(b) for b in body]
    lines.append("p(n,2d) columns: published Pythagoras-number bounds, stored as constants.")
    return "\n".join(lines)


def table_to_json(rows: list) -> str:
    return json.dumps([{"n": r.n, "2d": r.deg, "N-1": r.N_minus_1, "dim": r.dim_H,
                        "p_lower": r.p_lower, "p_upper": r.p_upper} for r in rows])


def describe(b: BoundData) -> str:
    return (f"n={b.n} d={b.d} k={b.k}: q={b.q} r={b.r} m={format_monomial(b.extremal)} "
            f"C={b.C} N={b.N}")

