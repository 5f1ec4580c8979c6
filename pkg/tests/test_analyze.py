import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
import sympy

from sosborder import registry
from sosborder.analyze import (
    DualCertificate,
    SearchFailedError,
    SpectraReport,
    analyze,
    char_poly,
    certificate_search,
    functional_space,
    max_rank_estimate,
    moment_matrix,
    psd_exact,
    rank_probe,
    strict_positivity,
)
from sosborder.core import enumerate_monomials, monomial_index, parse_poly, rref
from sosborder.gram import expand_sos, spectrahedron
from sosborder.sdp import LmiModel, SdpOptions, minimal_face

from conftest import SEED


def reznick_polys():
    return list(registry.get("reznick46").decomposition.polys)


# -- exact functionals --------------------------------------------------------

def test_functional_space_dimensions():
    p = reznick_polys()
    assert len(functional_space(p, 4, 3)) == 10
    assert len(functional_space(p + [parse_poly("x^3", 4)], 4, 3)) == 1
    assert len(functional_space([], 3, 2)) == comb(3 + 4 - 1, 4)


def test_moment_matrix_examples():
    n, d = 3, 2
    basis2d = enumerate_monomials(n, 2 * d)
    l = [Fraction(int(m == (4, 0, 0))) for m in basis2d]
    Q = moment_matrix(l, n, d)
    nz = [(i, j) for i, row in enumerate(Q) for j, x in enumerate(row) if x]
    assert nz == [(0, 0)] and Q[0][0] == 1
    # point evaluation at e1 = (1, 0, 0) gives c c^T
    ev = [Fraction(int(m[1] == 0 and m[2] == 0)) for m in basis2d]
    Q = moment_matrix(ev, n, d)
    assert sum(1 for row in Q for x in row if x) == 1
    point = (2, -1, 3)
    ev = [Fraction(np.prod([a ** e for a, e in zip(point, m)])) for m in basis2d]
    Q = moment_matrix(ev, n, d)
    assert sympy.Matrix(Q).rank() == 1


def test_char_poly_against_sympy():
    rng = random.Random(SEED)
    x = sympy.Symbol("x")
    for _ in range(20):
        m = rng.randint(1, 6)
        A = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(m)] for _ in range(m)]
        S = [[A[i][j] + A[j][i] for j in range(m)] for i in range(m)]
        ref = sympy.Matrix(S).charpoly(x).all_coeffs()[::-1]
        assert [sympy.Rational(c) for c in char_poly(S)] == ref


def test_psd_exact():
    assert psd_exact([[0, 0], [0, 2]])
    assert not psd_exact([[1, 0], [0, -1]])
    rng = random.Random(SEED + 1)
    for _ in range(40):
        m = rng.randint(1, 5)
        B = [[Fraction(rng.randint(-3, 3)) for _ in range(m)] for _ in range(rng.randint(1, m))]
        G = [[sum(B[k][i] * B[k][j] for k in range(len(B))) for j in range(m)] for i in range(m)]
        assert psd_exact(G)
        shift = Fraction(rng.randint(1, 3), 7)
        G[0][0] -= shift + G[0][0]  # negative diagonal entry
        assert not psd_exact(G)
    with pytest.raises(ValueError):
        psd_exact([[1, 2], [0, 1]])


def _check_certificate(cert, polys):
    n, d = cert.n, cert.d
    idx = monomial_index(n, 2 * d)
    for p in polys:
        for q in enumerate_monomials(n, d):
            val = sum(c * cert.l[idx[tuple(a + b for a, b in zip(m, q))]]
                      for m, c in p.terms.items())
            assert val == 0
    assert psd_exact(cert.Q_l) and cert.psd_proved
    m = len(cert.Q_l)
    R, _, r = rref([p.to_vector() for p in polys], m)
    assert cert.kernel == R[:r]
    assert any(cert.l)


def test_certificate_reznick():
    polys = reznick_polys()
    probes = [parse_poly(t, 4).leading_monomial() for t in ("x^3", "y^3", "z^3", "w^3")]
    cert = certificate_search(polys, probes)
    assert len(cert.kernel) == 4
    _check_certificate(cert, polys)
    back = DualCertificate.from_json(cert.to_json())
    assert back.l == cert.l and back.Q_l == cert.Q_l and back.kernel == cert.kernel
    assert back.probes == cert.probes
    text = cert.transcript()
    assert "moment matrix PSD: True" in text and "kernel dimension: 4" in text


def test_certificate_ex2_46():
    polys = list(registry.get("ex2:46").decomposition.polys)
    cert = certificate_search(polys)
    assert len(cert.kernel) == 5
    _check_certificate(cert, polys)


def test_certificate_no_probes():
    with pytest.raises(SearchFailedError):
        certificate_search(reznick_polys(), [])


def test_certificate_implies_boundary():
    s = registry.get("reznick46").decomposition
    certificate_search(list(s.polys))
    assert analyze(s).on_boundary is True


# -- positivity ---------------------------------------------------------------

def test_strict_positivity_examples():
    sq = parse_poly("x1^2 + x2^2 + x3^2", 3)
    assert strict_positivity(sq * sq * sq) == pytest.approx(1.0, abs=1e-9)
    assert strict_positivity(parse_poly("x1^2*x2^2", 2)) == pytest.approx(0.0, abs=1e-8)
    f = expand_sos(registry.get("reznick46").decomposition)
    val = strict_positivity(f, R=200)
    assert val > 1e-3
    assert val == pytest.approx(1 / 36, rel=1e-6)
    assert strict_positivity(f, R=32, seed=5) == strict_positivity(f, R=32, seed=5)
    with pytest.raises(ValueError):
        strict_positivity(parse_poly("x1^3", 2))


# -- numeric analyses -----------------------------------------------------------

def test_average_rank_dominates_points():
    for key in ["ex2:54", "ex3:46"]:
        param = spectrahedron(registry.get(key).decomposition)
        A0, As = param.numeric()
        model = LmiModel(A0, As)
        opts = SdpOptions(seed=11)
        probe = rank_probe(model, 6, opts, minimal_face(model, opts))
        assert probe.rank >= max(probe.point_ranks)
        assert max_rank_estimate(param, 6, opts) == probe.rank


def test_analyze_boundary_unique():
    rep = analyze(registry.get("ex1:54").decomposition)
    assert rep.verdict() == {"on_boundary": True, "strictly_positive": True,
                             "max_rank": 5, "unique_point": True}
    assert 0 <= rep.t_star <= 1e-6
    assert rep.max_rank == rep.point_ranks[0]  # singleton: every point has the same rank
    back = SpectraReport.from_json(rep.to_json())
    assert back.verdict() == rep.verdict() and back.f == rep.f
    assert "max_rank          5" in rep.to_text()


def test_analyze_interior_form():
    f = parse_poly("x1^4 + x2^4 + x3^4 + x1^2*x2^2", 3)
    rep = analyze(f)
    assert rep.on_boundary is False and rep.t_star > 1e-3
    assert rep.max_rank == 6  # positive definite points exist


def test_analyze_non_sos_form():
    motzkin = parse_poly("x1^4*x2^2 + x1^2*x2^4 + x3^6 - 3*x1^2*x2^2*x3^2", 3)
    rep = analyze(motzkin)
    assert rep.status == "infeasible" and rep.on_boundary is False
    assert rep.max_rank is None


def test_analyze_deterministic():
    s = registry.get("ex3:54").decomposition
    a = analyze(s, SdpOptions(seed=9))
    b = analyze(s, SdpOptions(seed=9))
    assert a.to_json() == b.to_json()


@pytest.mark.parametrize("key,rank", [("ex1:54", 5), ("ex2:54", 9), ("ex3:46", 8)])
def test_rank_stable_across_tolerance_decades(key, rank):
    s = registry.get(key).decomposition
    for tol in (1e-5, 1e-7):
        assert analyze(s, SdpOptions(tol_rank=tol)).max_rank == rank
