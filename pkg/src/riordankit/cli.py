"""Command-line front end.

Exit codes: 0 success, 2 parse or usage error, 3 a mathematical precondition
failed, 4 an internal contract failed (a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import decompose, riordan
from .affine import NonlinearProduct
from .errors import DomainError, InternalContractError
from .formats import (
    certificate_to_doc,
    dumps,
    matrix_from_doc,
    matrix_to_csv,
    matrix_to_doc,
    matrix_to_triangle,
)
from .fps import Series
from .gfparse import EvalError, ParseError, eval_text
from .involution import InvolutionSpec, build_involution, is_involution, klein

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


def read_series(text: str, n: int) -> Series:
    """A gf-expression if ``text`` mentions ``x``, else a coefficient list (zero-padded)."""
    if "x" in text:
        return eval_text(text, n)
    try:
        coeffs = Series.parse(text)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return Series.from_polynomial(coeffs.coeffs, n)


def load_matrix(path: str) -> riordan.RiordanMatrix:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at offset {exc.pos})") from None
    return matrix_from_doc(doc)


def emit_matrix(m: riordan.RiordanMatrix, fmt: str) -> str:
    if fmt == "triangle":
        return matrix_to_triangle(m)
    if fmt == "csv":
        return matrix_to_csv(m)
    return dumps(matrix_to_doc(m))


def cmd_build(args) -> str:
    d = read_series(args.d, args.n)
    h = read_series(args.h, args.n)
    return emit_matrix(riordan.from_dh(d, h), args.format)


def cmd_mul(args) -> str:
    out = load_matrix(args.paths[0])
    for p in args.paths[1:]:
        out = riordan.mul(out, load_matrix(p))
    return emit_matrix(out, args.format)


def cmd_inv(args) -> str:
    return emit_matrix(riordan.inverse(load_matrix(args.path)), args.format)


def cmd_project(args) -> str:
    return emit_matrix(riordan.project(load_matrix(args.path)), args.format)


def cmd_check(args) -> str:
    m = load_matrix(args.path)
    if args.involution:
        ok = is_involution(m)
    elif args.omega0:
        ok = riordan.is_omega0(m)
    else:
        ok = decompose.in_generated_by_involutions(m)
    return "true\n" if ok else "false\n"


def cmd_involution(args) -> str:
    alpha = read_series(args.alpha, max(args.n - 1, 0)) if args.n else Series([0])
    sign = {"+": 1, "-": -1}[args.sign]
    return emit_matrix(build_involution(InvolutionSpec(sign, alpha), args.n), args.format)


def cmd_commutator(args) -> str:
    m = load_matrix(args.path)
    a, b = decompose.commutator_decompose(m, _rational_arg(args.r))
    ok = riordan.commutator(a, b) == m
    return dumps({"A": matrix_to_doc(a), "B": matrix_to_doc(b), "verified": ok})


def cmd_factor(args) -> str:
    m = load_matrix(args.path)
    if not decompose.in_generated_by_involutions(m):
        raise DomainError("not in the group generated by involutions")
    return dumps(certificate_to_doc(decompose.factor_involutions(m)))


def cmd_named(args) -> str:
    name, n = args.name, args.n
    if name == "pascal":
        m = riordan.pascal(n)
    elif name == "identity":
        m = riordan.identity(n)
    elif name.startswith("klein:"):
        m = klein(name.split(":", 1)[1], n)
    else:
        raise UsageError(f"unknown matrix name {name!r}; use pascal, identity or klein:<tag>")
    return emit_matrix(m, args.format)


def cmd_apply(args) -> str:
    m = load_matrix(args.path)
    s = read_series(args.series, m.order)
    return riordan.act(m, s).to_text() + "\n"


def _rational_arg(text: str):
    from fractions import Fraction

    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riordankit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("json", "triangle", "csv"), default="json")

    p = sub.add_parser("build", help="matrix from a (d, h) pair")
    p.add_argument("--d", required=True, help="gf-expression or coefficient list")
    p.add_argument("--h", required=True, help="gf-expression or coefficient list")
    p.add_argument("-n", type=int, required=True, help="order (matrix is (n+1)x(n+1))")
    fmt(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("mul", help="product of matrix documents, left to right")
    p.add_argument("paths", nargs="+")
    fmt(p)
    p.set_defaults(func=cmd_mul)

    for name, func, help_ in (
        ("inv", cmd_inv, "group inverse"),
        ("project", cmd_project, "drop the last row and column"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("path")
        fmt(p)
        p.set_defaults(func=func)

    p = sub.add_parser("check", help="structural predicates")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--involution", action="store_true")
    g.add_argument("--omega0", action="store_true")
    g.add_argument("--membership", action="store_true")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("involution", help="nontrivial involution from sign and free entries")
    p.add_argument("--sign", choices=("+", "-"), required=True)
    p.add_argument("--alpha", default="0", help="free coefficients alpha_0, alpha_1, ...")
    p.add_argument("-n", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_involution)

    p = sub.add_parser("commutator", help="write a unit-diagonal matrix as [A, B]")
    p.add_argument("path")
    p.add_argument("--r", default="2")
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("factor", help="product of at most four involutions")
    p.add_argument("path")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("named", help="pascal, identity, or klein:<I|NEG_I|IPLUS0|IMINUS0>")
    p.add_argument("name")
    p.add_argument("-n", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_named)

    p = sub.add_parser("apply", help="action d * s(h) on a series")
    p.add_argument("path")
    p.add_argument("--series", required=True)
    p.set_defaults(func=cmd_apply)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 0) is not None and getattr(args, "n", 0) < 0:
        parser.error("order must be non-negative")
    try:
        out = args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonlinearProduct, InternalContractError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DomainError, EvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(out)
    return EXIT_OK


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
