import random
from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from sosborder.core import (
    DegreeError,
    DimensionError,
    ParseError,
    Polynomial,
    divides,
    enumerate_monomials,
    format_monomial,
    format_poly,
    lex_cmp,
    monomial_index,
    nullspace,
    parse_poly,
    rank,
    rref,
    same_row_space,
    transpose,
)

from conftest import SEED, random_form


def test_monomial_counts():
    for n in range(1, 7):
        for d in range(0, 7):
            monos = enumerate_monomials(n, d)
            assert len(monos) == comb(n + d - 1, d)
            assert len(set(monos)) == len(monos)
            assert all(sum(m) == d and len(m) == n for m in monos)


def test_lex_descending_and_index():
    monos = enumerate_monomials(3, 2)
    assert monos[0] == (2, 0, 0) and monos[-1] == (0, 0, 2)
    assert monos == sorted(monos, reverse=True)
    idx = monomial_index(3, 2)
    assert all(idx[m] == i for i, m in enumerate(monos))


@given(st.lists(st.integers(0, 4), min_size=3, max_size=3),
       st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_lex_is_strict_total(a, b):
    a, b = tuple(a), tuple(b)
    c = lex_cmp(a, b)
    assert c in (-1, 0, 1)
    assert (c == 0) == (a == b)
    assert lex_cmp(b, a) == -c


def test_divides():
    assert divides((1, 0, 2), (1, 1, 2))
    assert not divides((2, 0, 0), (1, 1, 2))


def test_format_monomial():
    assert format_monomial((2, 0, 1)) == "x1^2*x3"
    assert format_monomial((0, 0, 0)) == "1"
    assert format_monomial((1, 1, 0, 3), aliases=True) == "x*y*w^3"


def test_parse_examples():
    f = parse_poly("-x1^2 - x1*x2 + 3/2*x4^2")
    assert f.n == 4 and f.degree == 2
    assert f.coefficient((0, 0, 0, 2)) == Fraction(3, 2)
    assert f.coefficient((1, 1, 0, 0)) == -1
    # implicit products and aliases
    assert parse_poly("2x1x2", 2) == parse_poly("2*x1*x2", 2)
    assert parse_poly("x*y - w^2", 4) == parse_poly("x1*x2 - x4^2", 4)
    # cancellation gives an empty term list but keeps the degree
    z = parse_poly("x1^2 - x1^2", 2)
    assert z.is_zero() and z.degree == 2


@pytest.mark.parametrize("text,pos", [("x1^2 + ", 7), ("x1 $ x2", 3), ("3/0*x1", 0)])
def test_parse_errors(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_poly(text)
    assert exc.value.pos == pos


def test_parse_rejects_mixed_degree_and_bad_n():
    with pytest.raises(DegreeError):
        parse_poly("x1^2 + x2")
    with pytest.raises(DimensionError):
        parse_poly("x5^2", 3)


def test_parse_format_roundtrip_random():
    rng = random.Random(SEED)
    for _ in range(500):
        n, d = rng.randint(1, 5), rng.randint(0, 4)
        terms = {m: Fraction(rng.randint(-9, 9), rng.randint(1, 6))
                 for m in enumerate_monomials(n, d) if rng.random() < 0.4}
        f = Polynomial(n, terms, d)
        if f.is_zero():
            continue  # "0" carries no degree
        assert parse_poly(format_poly(f), n) == f


def test_polynomial_arithmetic():
    p = parse_poly("x1 + x2", 2)
    assert p * p == parse_poly("x1^2 + 2*x1*x2 + x2^2", 2)
    assert (p * p - p * p).is_zero()
    assert (p ** 3).degree == 3
    assert p.evaluate([1j, 1]) == 1 + 1j
    with pytest.raises(DegreeError):
        p + p * p
    with pytest.raises(DegreeError):
        Polynomial(2, {(1, 0): 1, (2, 0): 1})


def test_vector_roundtrip():
    rng = random.Random(SEED)
    for _ in range(50):
        f = random_form(rng, 3, 3)
        assert Polynomial.from_vector(3, 3, f.to_vector()) == f


def _random_matrix(rng, r, c, zero_rows=0):
    M = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)]
    for _ in range(zero_rows):
        # make a dependent row
        i, j, k = rng.randrange(r), rng.randrange(r), rng.randrange(r)
        M[i] = [a + 2 * b for a, b in zip(M[j], M[k])] if j != k else M[i]
    return M


def test_rref_against_sympy():
    rng = random.Random(SEED)
    for _ in range(40):
        r, c = rng.randint(1, 8), rng.randint(1, 9)
        M = _random_matrix(rng, r, c, zero_rows=rng.randint(0, 3))
        R, piv, rk = rref(M, c)
        SR, spiv = sympy.Matrix(M).rref()
        assert tuple(piv) == spiv
        assert rk == len(spiv)
        assert [[sympy.Rational(x) for x in row] for row in R[:rk]] == SR.tolist()[:rk]


def test_rref_idempotent_and_rank_transpose():
    rng = random.Random(SEED + 1)
    for _ in range(10):
        M = _random_matrix(rng, 20, 30, zero_rows=8)
        R, piv, rk = rref(M, 30)
        R2, piv2, rk2 = rref(R, 30)
        assert R2 == R and piv2 == piv
        assert rank(M, 30) == rank(transpose(M), 20) == rk


def test_nullspace_exact():
    rng = random.Random(SEED + 2)
    for _ in range(30):
        r, c = rng.randint(1, 7), rng.randint(1, 9)
        M = _random_matrix(rng, r, c, zero_rows=2)
        N = nullspace(M, c)
        assert len(N) == c - rank(M, c)
        for v in N:
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)
    assert len(nullspace([[0, 0, 0], [0, 0, 0]], 3)) == 3


def test_same_row_space():
    A = [[1, 2, 3], [0, 1, 1]]
    B = [[1, 3, 4], [2, 5, 7]]
    assert same_row_space(A, B, 3)
    assert not same_row_space(A, [[1, 0, 0]], 3)
