import dataclasses
import json
import subprocess
import sys

import pytest
import sympy

from sosborder import cli, registry
from sosborder.core import Polynomial, format_poly, parse_poly
from sosborder.gram import SosDecomposition, expand_sos, gram_from_sos
from sosborder.sdp import SolverError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- registry fidelity ----------------------------------------------------------

x1, x2, x3, x4, x5, x6 = sympy.symbols("x1:7")
x, y, z, w = x1, x2, x3, x4
_B = [x1**2 - x4**2, x2**2 - x4**2, x3**2 - x4**2,
      -x1**2 - x1*x2 - x1*x3 + x1*x4 - x2*x3 + x2*x4 + x3*x4]
_h = sympy.Rational(3, 2)
_R = [x * (_h * x**2 - (y**2 + z**2 + w**2)), y * (_h * y**2 - (x**2 + z**2 + w**2)),
      z * (_h * z**2 - (x**2 + y**2 + w**2)), w * (_h * w**2 - (x**2 + y**2 + z**2))]

# generator lists typed in independently, in factored form where the source has one
REENTERED = {
    "ex1:54": _B + [x5**2],
    "ex2:54": _B + [x5**2, x4 * x5],
    "ex3:54": _B + [x5**2, x1 * x5 + x4 * x5],
    "reznick46": _R,
    "ex1:46": _R[:2] + [z * (_h * z**2 - (y**2 + w**2)), w * (w**2 - (x**2 + z**2))],
    "ex2:46": _R + [y * z * w],
    "ex3:46": _R + [y**2 * z],
    "ex4:46": _R + [z**3],
    "ex1:64": _B + [x5**2 + x6**2],
    "ex2:64a": _B + [x5**2 + x6**2 - x4**2],
    "ex2:64b": _B + [x5**2 - x4**2, x6**2],
    "ex2:64c": _B + [x5**2, x6**2, x5 * x6 + x1 * x5],
    "ex2:64d": _B + [x5**2, x6**2, x5 * x6 + x1 * x5, x2 * x6],
}


def test_registry_has_thirteen_unique_keys():
    assert len(registry.EXAMPLES) == 13
    assert set(registry.EXAMPLES) == set(REENTERED)


@pytest.mark.parametrize("key", sorted(REENTERED))
def test_registry_expands_to_reentered_form(key, capsys):
    entry = registry.get(key)
    ref = sympy.expand(sum(p**2 for p in REENTERED[key]))
    code, out, _ = run(capsys, "analyze", "--example", key, "--dump-f")
    assert code == 0
    syms = {f"x{i}": s for i, s in enumerate((x1, x2, x3, x4, x5, x6), start=1)}
    dumped = sympy.sympify(out.strip().replace("^", "**"), locals=syms)
    assert sympy.expand(dumped - ref) == 0
    assert expand_sos(entry.decomposition).n == entry.n


def test_unknown_example_is_usage_error(capsys):
    code, _, err = run(capsys, "analyze", "--example", "nope")
    assert code == 2 and "unknown example" in err


# -- the five-square example in six variables -----------------------------------

def test_ex1_64_common_complex_zero():
    polys = registry.get("ex1:64").decomposition.polys
    for t in (1, 2 + 1j, -3):
        point = [0, 0, 0, 0, 1j * t, t]
        assert all(p.evaluate(point) == 0 for p in polys)


def test_ex1_64_gram_spectrahedron_is_not_a_point():
    base = list(registry.get("ex1:64").decomposition.polys)
    f = expand_sos(SosDecomposition(base))
    # (x5^2 + x6^2)^2 = (x5^2 - x6^2)^2 + (2 x5 x6)^2 = x5^4 + 2 (x5 x6)^2 + x6^4
    alt = SosDecomposition(base[:4] + [parse_poly("x5^2 - x6^2", 6), parse_poly("2*x5*x6", 6)])
    wide = SosDecomposition(base[:4] + [parse_poly(t, 6) for t in ("x5^2", "x5*x6", "x6^2")],
                            [1, 1, 1, 1, 1, 2, 1])
    assert expand_sos(alt) == f and expand_sos(wide) == f
    Q0, r0 = gram_from_sos(SosDecomposition(base))
    Q1, r1 = gram_from_sos(alt)
    Q2, r2 = gram_from_sos(wide)
    assert Q0 != Q1
    assert (r0, r1, r2) == (5, 6, 7)


# -- bounds / hilbert -------------------------------------------------------------

def test_bounds_table(capsys):
    code, out, _ = run(capsys, "bounds", "--table", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert [r["N-1"] for r in rows] == [3, 4, 13, 9, 15]
    assert [r["dim"] for r in rows] == [10, 10, 20, 15, 21]
    code, out, _ = run(capsys, "bounds", "--table")
    assert code == 0 and "N(n,d,2d)-1" in out


def test_bounds_single_and_errors(capsys):
    code, out, _ = run(capsys, "bounds", "-n", "4", "--deg", "6", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["N-1"] == 13 and data["k"] == 6
    assert run(capsys, "bounds", "-n", "4", "--deg", "5")[0] == 2
    assert run(capsys, "bounds", "-n", "4")[0] == 2
    assert run(capsys, "bounds", "-n", "4", "--deg", "2")[0] == 2  # d = 1


def test_hilbert_rows(capsys):
    cases = [
        ("x1^3, x2^3, x3^3", 3, 6, [1, 3, 6, 7, 6, 3, 1]),
        ("x1^3, x2^3, x3^3, x1^2*x2", 3, 6, [1, 3, 6, 6, 4, 1, 0]),
        ("x^3, y^3, z^3, w^3", 4, 8, [1, 4, 10, 16, 19, 16, 10, 4, 1]),
        ("x1^3 - x2^3, x2^3 + x1*x2^2, x3^3", 3, 6, [1, 3, 6, 7, 6, 3, 1]),
        ("x1^2, x2^3", 2, 4, [1, 2, 2, 1, 0]),
    ]
    for gens, n, kmax, want in cases:
        code, out, _ = run(capsys, "hilbert", "-n", str(n), gens, "--kmax", str(kmax),
                           "--format", "json")
        assert code == 0
        assert [v for _, v in json.loads(out)["values"]] == want


def test_hilbert_parse_error(capsys):
    code, _, err = run(capsys, "hilbert", "-n", "2", "x1^2 + $", "--kmax", "2")
    assert code == 2 and "error" in err


# -- analyze / examples --------------------------------------------------------

def test_analyze_file_and_json_schema(tmp_path, capsys):
    path = tmp_path / "f.txt"
    path.write_text("# five squares\nn=5\n" + "\n".join(registry.get("ex1:54").generators) + "\n")
    code, out, _ = run(capsys, "analyze", str(path), "--format", "json", "--certify")
    assert code == 0
    data = json.loads(out)
    rep = data["report"]
    assert rep["max_rank"] == 5 and rep["unique_point"] is True and rep["seed"] == 42
    assert set(rep) >= {"f", "t_star", "on_boundary", "sphere_min", "strictly_positive",
                        "max_rank", "unique_point", "widths"}
    assert "certificate" in data


def test_analyze_bad_file(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("x1^2\n")
    assert run(capsys, "analyze", str(path))[0] == 2
    assert run(capsys, "analyze", str(tmp_path / "missing.txt"))[0] == 2
    assert run(capsys, "analyze")[0] == 2


def test_examples_run_and_certify(capsys):
    code, out, _ = run(capsys, "examples", "run", "ex3:54")
    assert code == 0 and "rank   6 unique True" in out
    code, out, _ = run(capsys, "analyze", "--example", "reznick46", "--certify",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and all(data["checks"].values())
    assert data["certificate"]["psd_proved"] is True


def test_examples_list(capsys):
    code, out, _ = run(capsys, "examples", "list", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 13


def test_mismatch_exit_code(monkeypatch, capsys):
    wrong = dataclasses.replace(registry.get("ex1:54"), max_rank=4)
    monkeypatch.setitem(registry.EXAMPLES, "ex1:54", wrong)
    code, out, _ = run(capsys, "analyze", "--example", "ex1:54")
    assert code == 1 and "NO: max_rank" in out


def test_solver_failure_exit_code(monkeypatch, capsys):
    def boom(*a, **k):
        raise SolverError("synthetic breakdown")
    monkeypatch.setattr(cli, "analyze", boom)
    code, _, err = run(capsys, "analyze", "--example", "ex1:54")
    assert code == 3 and "synthetic breakdown" in err


@pytest.mark.slow
def test_run_all_seed_7(capsys):
    code, out, _ = run(capsys, "examples", "run-all", "--seed", "7")
    assert code == 0
    assert out.strip().endswith("seed 7: all match")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "sosborder", "bounds", "--table"],
                         capture_output=True, text=True, timeout=60)
    assert res.returncode == 0 and "13" in res.stdout
