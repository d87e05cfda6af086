"""Command-line front end.

Every subcommand prints one JSON document (``--json``) or a short key/value
report, and exits with 0 on success, 1 when a checked property is false, 2 on
usage or parse errors and 3 when a precondition fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import deform, liesuper, orbit
from .errors import (DegreeOverflowError, NonRegularError, NotInOrbitError, NotInvertibleError, ParityError,
                     ParseError, SignatureError, UnsupportedFieldError)
from .parser import parse, tokenize
from .serialize import matrix_from_json, matrix_to_json, poly_to_json
from .superring import RingSignature, SuperPolynomial
from .supermatrix import berezinian, mat_inverse, power_sums

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


class CheckFailed(Exception):
    """Carries a report whose verified property turned out false."""

    def __init__(self, report: dict):
        super().__init__("check failed")
        self.report = report


class UsageError(Exception):
    pass


# -- argument helpers --------------------------------------------------------

def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}") from None
    if a < 0 or b < 0:
        raise argparse.ArgumentTypeError("sizes must be non-negative")
    return a, b


def _rationals(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}") from None


def infer_ring(texts: Sequence[str]) -> RingSignature:
    """Smallest default-named ring containing every ``x<i>`` and ``t<i>`` in the texts."""
    M = N = 0
    for text in texts:
        for tok in tokenize(text):
            if tok.kind != "NAME":
                continue
            head, tail = tok.value[0], tok.value[1:]
            if head in "xt" and tail.isdigit() and int(tail) > 0:
                if head == "x":
                    M = max(M, int(tail))
                else:
                    N = max(N, int(tail))
    return RingSignature(M, N)


def _ring(args, texts: Sequence[str]) -> RingSignature:
    if args.ring is not None:
        return RingSignature(*args.ring)
    return infer_ring(texts)


def _read_json(args):
    src = args.input
    try:
        if src in (None, "-"):
            return json.load(sys.stdin)
        with open(src, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON input: {exc}") from None
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _matrix_texts(data) -> list[str]:
    try:
        return [str(x) for row in data["entries"] for x in row]
    except (KeyError, TypeError):
        raise UsageError("matrix JSON needs 'm', 'n' and 'entries'") from None


def _read_matrix(args):
    data = _read_json(args)
    ring = _ring(args, _matrix_texts(data))
    return matrix_from_json(ring, data)


def _algebra(args) -> liesuper.LieSuperAlgebra:
    if args.table:
        with open(args.table, encoding="utf-8") as fh:
            return liesuper.LieSuperAlgebra.from_json(json.load(fh))
    if args.shape is None:
        raise UsageError("--shape is required")
    m, n = args.shape
    return liesuper.build(args.algebra, m, n)


def _envelope(args) -> deform.Envelope:
    return deform.Envelope(_algebra(args), args.h_order)


def _orbit_spec(args) -> orbit.OrbitSpec:
    if args.shape is None or args.lambdas is None:
        raise UsageError("--shape and --lambda are required")
    m, n = args.shape
    return orbit.OrbitSpec(args.algebra, m, n, args.lambdas)


# -- subcommands -------------------------------------------------------------

def cmd_eval(args) -> dict:
    ring = _ring(args, args.expr)
    vals = [parse(e, ring) for e in args.expr]
    out = [{"text": str(v), "terms": poly_to_json(v), "parity": _parity_name(v)} for v in vals]
    return {"ring": [ring.n_even, ring.n_odd], "results": out}


def _parity_name(v: SuperPolynomial) -> str:
    p = v.parity()
    return {0: "even", 1: "odd", None: "mixed"}[p]


def cmd_ber(args) -> dict:
    a = _read_matrix(args)
    return {"ber": str(berezinian(a))}


def cmd_strpow(args) -> dict:
    a = _read_matrix(args)
    sums = power_sums(a, args.kmax)
    return {"powerSums": {str(k): str(v) for k, v in enumerate(sums, 1)}}


def cmd_inv(args) -> dict:
    a = _read_matrix(args)
    return {"inverse": matrix_to_json(mat_inverse(a))}


def cmd_bracket_table(args) -> dict:
    return _algebra(args).to_json()


def cmd_check_axioms(args) -> dict:
    L = _algebra(args)
    if args.corrupt:
        i, j, k = args.corrupt
        L = L.with_constant(i, j, k, L.c(i, j, k) + 1)
    report = liesuper.check_axioms(L).to_json()
    if not report["ok"]:
        raise CheckFailed(report)
    return report


def cmd_killing(args) -> dict:
    return liesuper.killing_form(_algebra(args)).to_json()


def cmd_poisson(args) -> dict:
    P = liesuper.PoissonRing(_algebra(args))
    f, g = parse(args.f, P.ring), parse(args.g, P.ring)
    return {"bracket": str(liesuper.poisson_bracket(f, g, P))}


def cmd_diagonalize(args) -> dict:
    spec = _orbit_spec(args)
    w = _read_matrix(args)
    result = orbit.superdiagonalize(w, spec)
    report = result.to_json()
    if any(result.residuals) or not result.member:
        raise CheckFailed(report)
    return report


def cmd_vandermonde(args) -> dict:
    if args.shape is None or args.lambdas is None:
        raise UsageError("--shape and --lambda are required")
    m, n = args.shape
    lam = args.lambdas
    if len(set(lam)) != len(lam):
        raise NonRegularError("eigenvalues collide; the signed Vandermonde determinant vanishes")
    res = orbit.vandermonde_criterion(lam, m, n)
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in res.items()}


def cmd_ad_invariance(args) -> dict:
    if args.shape is None:
        raise UsageError("--shape is required")
    m, n = args.shape
    report = orbit.ad_invariance_check(args.algebra, m, n, args.kmax, seed=args.seed).to_json()
    if not report["ok"]:
        raise CheckFailed(report)
    return report


def cmd_syzygy_verify(args) -> dict:
    data = _read_json(args)
    try:
        texts = list(data["q"]) + list(data["f"]) + [x for row in data["F"] for x in row]
    except (KeyError, TypeError):
        raise UsageError("certificate JSON needs 'q', 'f' and 'F'") from None
    ring = _ring(args, [str(t) for t in texts])
    q = [parse(str(t), ring) for t in data["q"]]
    f = [parse(str(t), ring) for t in data["f"]]
    F = [[parse(str(t), ring) for t in row] for row in data["F"]]
    report = orbit.syzygy_verify(q, f, F)
    if not report["ok"]:
        raise CheckFailed(report)
    return report


def cmd_symmetrize(args) -> dict:
    env = _envelope(args)
    f = parse(args.f, env.poisson.ring)
    a = deform.symmetrize(env, f)
    return {"element": a.to_json(), "text": str(a)}


def cmd_star(args) -> dict:
    env = _envelope(args)
    ring = env.poisson.ring
    f, g = parse(args.f, ring), parse(args.g, ring)
    fg = deform.star_product(env, f, g)
    gf = deform.star_product(env, g, f)
    sign = -1 if f.parity() and g.parity() else 1
    return {"product": str(fg), "reversed": str(gf), "gradedCommutator": str(fg - gf.scale(sign))}


def cmd_casimir(args) -> dict:
    env = _envelope(args)
    p, P = deform.casimir_element(env, args.index)
    return {"index": args.index, "classical": str(p), "element": P.to_json(), "central": deform.centrality_check(P)}


def cmd_central(args) -> dict:
    env = _envelope(args)
    if args.f is not None:
        P = deform.symmetrize(env, parse(args.f, env.poisson.ring))
    elif args.index is not None:
        P = deform.casimir_element(env, args.index)[1]
    else:
        raise UsageError("give an expression or --index")
    report = {"element": P.to_json(), "central": deform.centrality_check(P)}
    if not report["central"]:
        raise CheckFailed(report)
    return report


def cmd_quotient_basis(args) -> dict:
    env = _envelope(args)
    ideal = deform.orbit_ideal(env, _orbit_spec(args))
    qb = deform.quotient_basis(env, ideal, args.deg_cutoff)
    out = qb.to_json()
    if args.reduce:
        a = deform.symmetrize(env, parse(args.reduce, env.poisson.ring))
        out["reduced"] = qb.reduce(a).to_json()
    return out


def cmd_star_axioms(args) -> dict:
    env = _envelope(args)
    qb = None
    if args.lambdas is not None:
        ideal = deform.orbit_ideal(env, _orbit_spec(args))
        qb = deform.quotient_basis(env, ideal, max(args.deg_cutoff, 4))
    report = deform.star_axiom_check(env, qb, samples=args.samples, seed=args.seed).to_json()
    if not report["ok"]:
        raise CheckFailed(report)
    return report


# -- parser ------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--ring", type=_pair, metavar="M,N", help="even and odd generator counts")
    p.add_argument("--shape", type=_pair, metavar="m,n", help="block shape of the superalgebra")
    p.add_argument("--algebra", choices=("gl", "sl", "osp"), default="gl")
    p.add_argument("--table", metavar="FILE", help="structure constants JSON instead of a preset")
    p.add_argument("--lambda", dest="lambdas", type=_rationals, metavar="l1,l2,...",
                   help="diagonal entries of X0")
    p.add_argument("--h-order", type=int, default=3, metavar="H")
    p.add_argument("--deg-cutoff", type=int, default=4, metavar="d")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--input", metavar="FILE", help="JSON input (default stdin)")
    p.add_argument("--json", action="store_true", help="print JSON")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="superorbit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("eval", cmd_eval, "parse and canonicalize ring elements")
    p.add_argument("expr", nargs="+")
    add("ber", cmd_ber, "Berezinian of a matrix read as JSON")
    p = add("strpow", cmd_strpow, "supertraces of matrix powers")
    p.add_argument("--kmax", type=int, default=3)
    add("inv", cmd_inv, "inverse of an even supermatrix")
    add("bracket-table", cmd_bracket_table, "structure constants of a preset")
    p = add("check-axioms", cmd_check_axioms, "graded antisymmetry and Jacobi")
    p.add_argument("--corrupt", type=int, nargs=3, metavar=("I", "J", "K"),
                   help="add 1 to c_IJ^K before checking")
    add("killing", cmd_killing, "Killing form and its determinant")
    p = add("poisson", cmd_poisson, "Poisson bracket of two coordinate polynomials")
    p.add_argument("f")
    p.add_argument("g")
    add("diagonalize", cmd_diagonalize, "diagonalize an orbit point order by order")
    add("vandermonde", cmd_vandermonde, "signed Vandermonde determinant")
    p = add("ad-invariance", cmd_ad_invariance, "conjugation invariance of str(M^k)")
    p.add_argument("--kmax", type=int, default=3)
    add("syzygy-verify", cmd_syzygy_verify, "verify an antisymmetric syzygy certificate")
    p = add("symmetrize", cmd_symmetrize, "supersymmetrizer into U_h")
    p.add_argument("f")
    p = add("star", cmd_star, "star product of two coordinate polynomials")
    p.add_argument("f")
    p.add_argument("g")
    p = add("casimir", cmd_casimir, "invariant str(M^i) and its image in U_h")
    p.add_argument("--index", type=int, default=2)
    p = add("central", cmd_central, "centrality of tau(f) or of a Casimir")
    p.add_argument("f", nargs="?")
    p.add_argument("--index", type=int)
    p = add("quotient-basis", cmd_quotient_basis, "basis of U_h modulo the orbit ideal")
    p.add_argument("--reduce", metavar="EXPR", help="also reduce tau(EXPR)")
    p = add("star-axioms", cmd_star_axioms, "deformation axioms on sampled pairs")
    p.add_argument("--samples", type=int, default=20)
    return parser


def _render(result: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(result, sort_keys=True, indent=2)
    lines = []
    for k in sorted(result):
        v = result[k]
        lines.append(f"{k}: {v if isinstance(v, (str, int, bool)) else json.dumps(v, sort_keys=True)}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    code = EXIT_OK
    try:
        result = args.fn(args)
    except CheckFailed as exc:
        result, code = exc.report, EXIT_FAILED
    except (ParseError, UsageError, SignatureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonRegularError, NotInOrbitError, UnsupportedFieldError, NotInvertibleError, DegreeOverflowError,
            ParityError, ValueError, ArithmeticError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(_render(result, args.json))
    return code


if __name__ == "__main__":
    sys.exit(main())
