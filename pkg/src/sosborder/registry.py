"""Named boundary examples: generator lists and the verdicts recorded for them."""

from __future__ import annotations

from dataclasses import dataclass

from .core import parse_poly
from .gram import SosDecomposition

_BASE54 = [
    "x1^2 - x4^2",
    "x2^2 - x4^2",
    "x3^2 - x4^2",
    "-x1^2 - x1*x2 - x1*x3 + x1*x4 - x2*x3 + x2*x4 + x3*x4",
]

_REZNICK = [
    "3/2*x^3 - x*y^2 - x*z^2 - x*w^2",
    "3/2*y^3 - y*x^2 - y*z^2 - y*w^2",
    "3/2*z^3 - z*x^2 - z*y^2 - z*w^2",
    "3/2*w^3 - w*x^2 - w*y^2 - w*z^2",
]


@dataclass(frozen=True)
class ExampleEntry:
    key: str
    n: int
    generators: tuple  # polynomial strings
    on_boundary: bool = True
    strictly_positive: bool = True
    max_rank: int | None = None
    unique_point: bool | None = None
    note: str = ""

    @property
    def decomposition(self) -> SosDecomposition:
        return SosDecomposition([parse_poly(g, self.n) for g in self.generators])

    def expected(self) -> dict:
        return {"on_boundary": self.on_boundary, "strictly_positive": self.strictly_positive,
                "max_rank": self.max_rank, "unique_point": self.unique_point}


def _e(key, n, gens, rank, unique, note=""):
    return ExampleEntry(key, n, tuple(gens), max_rank=rank, unique_point=unique, note=note)


EXAMPLES = {e.key: e for e in [
    _e("ex1:54", 5, _BASE54 + ["x5^2"], 5, True, "sum of 5 squares, unique"),
    _e("ex2:54", 5, _BASE54 + ["x5^2", "x4*x5"], 9, False, "6 squares, max rank 9"),
    _e("ex3:54", 5, _BASE54 + ["x5^2", "x1*x5 + x4*x5"], 6, True, "6 squares, unique"),
    _e("reznick46", 4, _REZNICK, 4, True, "4 squares, unique (exact certificate)"),
    _e("ex1:46", 4, _REZNICK[:2] + ["3/2*z^3 - z*y^2 - z*w^2", "w^3 - w*x^2 - w*z^2"], 4, True,
       "perturbed, still unique"),
    _e("ex2:46", 4, _REZNICK + ["y*z*w"], 5, True, "5 squares, unique (exact certificate)"),
    _e("ex3:46", 4, _REZNICK + ["y^2*z"], 8, False, "5 squares, max rank 8"),
    _e("ex4:46", 4, _REZNICK + ["z^3"], 13, False, "5 squares, max rank 13"),
    # only boundary membership and positivity are claimed here; the square
    # (x5^2 + x6^2)^2 = (x5^2 - x6^2)^2 + (2*x5*x6)^2 gives a second Gram matrix
    _e("ex1:64", 6, _BASE54 + ["x5^2 + x6^2"], None, None, "5 < n squares, common complex zero"),
    _e("ex2:64a", 6, _BASE54 + ["x5^2 + x6^2 - x4^2"], 5, True, "unique, rank 5"),
    _e("ex2:64b", 6, _BASE54 + ["x5^2 - x4^2", "x6^2"], 6, True, "unique, rank 6"),
    _e("ex2:64c", 6, _BASE54 + ["x5^2", "x6^2", "x5*x6 + x1*x5"], 11, False, "max rank 11"),
    _e("ex2:64d", 6, _BASE54 + ["x5^2", "x6^2", "x5*x6 + x1*x5", "x2*x6"], 15, False,
       "max rank 15"),
]}


def get(key: str) -> ExampleEntry:
    try:
        return EXAMPLES[key]
    except KeyError:
        raise KeyError(f"unknown example {key!r}; known: {', '.join(EXAMPLES)}") from None
