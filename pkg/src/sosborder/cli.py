"""Command-line front end.

Exit codes: 0 success or match, 1 expectation mismatch, 2 usage or parse
error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import registry
from .analyze import CertificateError, analyze, certificate_search
from .bounds import DomainError, bound_data, describe, table_N, table_to_json, table_to_text
from .core import DegreeError, DimensionError, ParseError, format_poly, parse_poly
from .gram import SosDecomposition, expand_sos
from .ideals import (
    HilbertTable,
    IdealGens,
    MonomialIdeal,
    hf_generated,
    hilbert_table,
)
from .sdp import SdpOptions, SolverError

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload) if not isinstance(payload, str) else payload)
    else:
        print(text)


# ---------------------------------------------------------------------------
# bounds

def cmd_bounds(args) -> int:
    if args.table:
        rows = table_N()
        _emit(args, table_to_text(rows), table_to_json(rows))
        return EXIT_OK
    if args.n is None or args.deg is None:
        raise UsageError("bounds needs --table or both -n and --deg")
    if args.deg % 2:
        raise UsageError(f"degree {args.deg} is odd; Gram matrices need an even degree")
    d = args.deg // 2
    k = args.k if args.k is not None else args.deg
    b = bound_data(args.n, d, k)
    text = describe(b) + f"\nN - 1 = {b.N - 1}"
    _emit(args, text, {"n": b.n, "d": b.d, "k": b.k, "q": b.q, "r": b.r,
                       "extremal": list(b.extremal), "C": b.C, "N": b.N, "N-1": b.N - 1})
    return EXIT_OK


# ---------------------------------------------------------------------------
# hilbert

def _split_generators(text: str) -> list:
    return [g.strip() for g in text.replace(";", ",").split(",") if g.strip()]


def cmd_hilbert(args) -> int:
    gens = [parse_poly(g, args.n) for g in _split_generators(args.generators)]
    if not gens:
        raise UsageError("no generators given")
    if all(len(g.terms) == 1 for g in gens):
        table = hilbert_table(MonomialIdeal(args.n, [g.leading_monomial() for g in gens]),
                              args.kmax)
    elif len({g.degree for g in gens}) == 1:
        table = hilbert_table(IdealGens(gens, args.n), args.kmax)
    else:
        name = "<" + ", ".join(format_poly(g) for g in gens) + ">"
        table = HilbertTable(name, [(k, hf_generated(gens, args.n, k))
                                    for k in range(args.kmax + 1)])
    _emit(args, table.to_text(), table.to_json())
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze

def read_poly_file(path: str) -> SosDecomposition:
    """First non-comment line ``n=<int>``, then one polynomial per line."""
    with open(path) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].replace(" ", "").startswith("n="):
        raise UsageError(f"{path}: first line must be n=<int>")
    try:
        n = int(lines[0].replace(" ", "")[2:])
    except ValueError:
        raise UsageError(f"{path}: bad variable count {lines[0]!r}") from None
    polys = [parse_poly(ln, n) for ln in lines[1:]]
    if not polys:
        raise UsageError(f"{path}: no polynomials")
    return SosDecomposition(polys)


def _options(args) -> SdpOptions:
    return SdpOptions(eps_feas=args.tol_feas, tol_rank=args.tol_eig, seed=args.seed)


def _compare(expected: dict, got: dict) -> dict:
    return {k: got.get(k) == v for k, v in expected.items() if v is not None}


def _run(decomp: SosDecomposition, args, expected: dict | None, certify: bool):
    report = analyze(decomp, _options(args), restarts=args.restarts)
    out = {"report": json.loads(report.to_json())}
    text = [report.to_text()]
    ok = True
    if expected is not None:
        checks = _compare(expected, report.verdict())
        out["expected"] = expected
        out["checks"] = checks
        ok = all(checks.values())
        text.append("expected          " + ", ".join(
            f"{k}={v}" for k, v in expected.items() if v is not None))
        text.append("match             " + ("yes" if ok else "NO: " + ", ".join(
            k for k, v in checks.items() if not v)))
    if certify:
        try:
            cert = certificate_search(list(decomp.polys))
            out["certificate"] = json.loads(cert.to_json())
            text.append("certificate\n" + cert.transcript())
            if report.unique_point is False:
                # the two routes disagree: the exact one proves uniqueness
                ok = False
                text.append("exact certificate contradicts the numeric width probe")
        except CertificateError as exc:
            out["certificate"] = {"error": type(exc).__name__, "message": str(exc)}
            text.append(f"certificate: {type(exc).__name__}: {exc}")
    return ok, out, "\n".join(text)


def cmd_analyze(args) -> int:
    if (args.file is None) == (args.example is None):
        raise UsageError("give exactly one of FILE or --example")
    if args.example is not None:
        entry = registry.get(args.example)
        decomp, expected = entry.decomposition, entry.expected()
    else:
        decomp, expected = read_poly_file(args.file), None
    if args.dump_f:
        f = expand_sos(decomp)
        _emit(args, format_poly(f), {"n": f.n, "f": format_poly(f)})
        return EXIT_OK
    ok, payload, text = _run(decomp, args, expected, args.certify)
    _emit(args, text, payload)
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# examples

def cmd_examples(args) -> int:
    if args.action == "list":
        rows = [(e.key, e.n, len(e.generators), e.note) for e in registry.EXAMPLES.values()]
        text = "\n".join(f"{k:10s} n={n} squares={s}  {note}" for k, n, s, note in rows)
        _emit(args, text, [{"key": k, "n": n, "squares": s, "note": note}
                           for k, n, s, note in rows])
        return EXIT_OK
    if args.action == "run":
        if not args.key:
            raise UsageError("examples run needs a key")
        keys = [args.key]
    else:
        keys = list(registry.EXAMPLES)
    results, all_ok, lines = [], True, []
    for key in keys:
        entry = registry.get(key)
        ok, payload, _ = _run(entry.decomposition, args, entry.expected(), False)
        all_ok &= ok
        rep = payload["report"]
        payload["key"] = key
        results.append(payload)
        lines.append(f"{key:10s} rank {rep['max_rank']!s:>3} unique {rep['unique_point']!s:5s} "
                     f"boundary {rep['on_boundary']!s:5s} t*={rep['t_star']:.1e} "
                     f"{'match' if ok else 'MISMATCH'}")
    lines.append(f"seed {args.seed}: {'all match' if all_ok else 'mismatches found'}")
    _emit(args, "\n".join(lines), {"seed": args.seed, "results": results, "all_match": all_ok})
    return EXIT_OK if all_ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sosborder", description=(
        "Bounds, Hilbert functions and Gram spectrahedra of forms on the SOS boundary."))
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["text", "json"], default="text")

    def solver(sp):
        sp.add_argument("--tol-eig", type=float, default=1e-6,
                        help="relative eigenvalue threshold for ranks")
        sp.add_argument("--tol-feas", type=float, default=1e-8)
        sp.add_argument("--restarts", type=int, default=8,
                        help="random linear objectives for the rank probe")
        sp.add_argument("--seed", type=int, default=42)

    b = sub.add_parser("bounds", help="N(n,d,k) and the small-case table")
    b.add_argument("--table", action="store_true")
    b.add_argument("-n", type=int)
    b.add_argument("--deg", type=int, help="2d")
    b.add_argument("-k", type=int, help="degree k (default 2d)")
    common(b)
    b.set_defaults(func=cmd_bounds)

    h = sub.add_parser("hilbert", help="Hilbert function of an ideal")
    h.add_argument("-n", type=int, required=True)
    h.add_argument("generators", help="comma-separated forms")
    h.add_argument("--kmax", type=int, required=True)
    common(h)
    h.set_defaults(func=cmd_hilbert)

    a = sub.add_parser("analyze", help="boundary, rank and uniqueness of a sum of squares")
    a.add_argument("file", nargs="?")
    a.add_argument("--example")
    a.add_argument("--certify", action="store_true")
    a.add_argument("--dump-f", action="store_true")
    common(a)
    solver(a)
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("examples", help="registered examples")
    e.add_argument("action", choices=["list", "run", "run-all"])
    e.add_argument("key", nargs="?")
    common(e)
    solver(e)
    e.set_defaults(func=cmd_examples)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, DegreeError, DimensionError, DomainError,
            KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
