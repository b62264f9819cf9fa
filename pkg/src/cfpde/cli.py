"""Command-line driver: ``cfpde {solve,terms,adomian,check,compare}``.

Exit codes: 0 success, 1 usage, 2 parse error, 3 solver error, 4 check failed.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from fractions import Fraction

from . import syntax
from .cadm import DEFAULT_ORDER, adomian_polynomials, cadm_iterates, cadm_solve, formal_parts
from .checks import residual
from .crdtm import crdtm_solve
from .errors import CfpdeError, ExprError, ParseError
from .kernel import to_text as expr_text
from .operators import build_operator
from .problems import load_problem
from .report import GridSpec, error_table, methods_agree

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SOLVER, EXIT_CHECK = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from None


def _grid(text: str) -> GridSpec:
    try:
        return GridSpec.parse(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _order(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        n = -1
    if n < 0:
        raise argparse.ArgumentTypeError(f"order must be a non-negative integer: {text!r}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfpde", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    params = _Parser(add_help=False)
    params.add_argument("--alpha", type=_rational, help="override alpha (p/q)")
    params.add_argument("--beta", type=_rational, help="override beta (p/q)")
    params.add_argument("--order", type=_order, default=DEFAULT_ORDER,
                        help="truncation order m (default %(default)s)")

    problem = _Parser(add_help=False, parents=[params])
    problem.add_argument("--problem", required=True,
                         help="problem file or built-in name (diffusion, gas, advection)")

    def method(p, default):
        p.add_argument("--method", choices=("cadm", "crdtm", "both"), default=default)

    def output(p):
        p.add_argument("--grid", type=_grid, default=GridSpec(),
                       help="x=a:b:n,t=c:d:n (default x=0.1:2:50,t=0:1:50)")
        p.add_argument("--out", help="CSV path (default stdout)")
        p.add_argument("--format", choices=("csv",), default="csv")

    p = sub.add_parser("solve", parents=[problem], help="evaluate series on a grid")
    method(p, "cadm")
    output(p)

    p = sub.add_parser("terms", parents=[problem], help="print decomposition terms")
    method(p, "cadm")

    p = sub.add_parser("adomian", help="print Adomian polynomials of a nonlinearity")
    p.add_argument("--nonlinearity", required=True, help='e.g. "u*Db(u)+u^2"')
    p.add_argument("--alpha", type=_rational, default=Fraction(1, 2),
                   help="order bound to Da (default 1/2)")
    p.add_argument("--beta", type=_rational, default=Fraction(1, 3),
                   help="order bound to Db (default 1/3, kept distinct from alpha)")
    p.add_argument("--order", type=_order, default=3, help="highest polynomial index")

    p = sub.add_parser("check", parents=[problem], help="verify the residual order")
    method(p, "both")

    p = sub.add_parser("compare", parents=[problem], help="both methods against exact")
    output(p)
    p.add_argument("--check-equivalence", action="store_true",
                   help="fail (exit 4) unless both methods agree pointwise to 1e-12")
    return parser


def _t_power(k: int, alpha: Fraction) -> str:
    q = k * alpha
    if q == 1:
        return "t"
    return f"t^{q}" if q.denominator == 1 else f"t^({q})"


def _graded_text(coeffs, alpha: Fraction) -> str:
    pieces = []
    for k, c in enumerate(coeffs):
        if c.is_zero:
            continue
        if k == 0:
            pieces.append(expr_text(c))
        elif len(c.terms) == 1:
            pieces.append(f"{expr_text(c)}*{_t_power(k, alpha)}")
        else:
            pieces.append(f"({expr_text(c)})*{_t_power(k, alpha)}")
    return " + ".join(pieces) or "0"


def _methods(choice: str) -> tuple[str, ...]:
    return ("cadm", "crdtm") if choice == "both" else (choice,)


@contextlib.contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _cmd_solve(args, problem) -> int:
    methods = _methods(args.method)
    report = error_table(problem, args.order, args.grid, methods=methods, with_exact=False)
    with _sink(args.out) as out:
        report.write_csv(out)
    return EXIT_OK


def _cmd_terms(args, problem) -> int:
    if "cadm" in _methods(args.method):
        if len(_methods(args.method)) > 1:
            print("# cadm")
        for n, u in enumerate(cadm_iterates(problem, args.order)):
            print(f"u{n} = {_graded_text(u.coeffs, problem.alpha)}")
    if "crdtm" in _methods(args.method):
        if len(_methods(args.method)) > 1:
            print("# crdtm")
        for k, c in enumerate(crdtm_solve(problem, args.order).coeffs):
            print(f"U{k} = {expr_text(c)}")
    return EXIT_OK


def _cmd_adomian(args) -> int:
    try:
        tree = syntax.parse_expr(args.nonlinearity, {"a": args.alpha, "b": args.beta})
        extra = syntax.symbols(tree) - {"u", "x"}
        if extra:
            raise ParseError(f"nonlinearity may not use {', '.join(sorted(extra))}")
        op = build_operator(tree, args.alpha, args.beta)
    except ExprError as exc:
        raise ParseError(str(exc), column=None if exc.pos is None else exc.pos + 1) from None
    names = {args.alpha: "Da", args.beta: "Db"}
    for n, a in enumerate(adomian_polynomials(op, formal_parts(args.order))):
        print(f"A{n} = {a.to_text(names)}")
    return EXIT_OK


def _cmd_check(args, problem) -> int:
    ok = True
    for name in _methods(args.method):
        series = cadm_solve(problem, args.order) if name == "cadm" else crdtm_solve(problem, args.order)
        res = residual(problem, series)
        bad = [(k, r) for k, r in enumerate(res) if not r.is_zero]
        for k, r in bad:
            print(f"{name}: grade {k} residual {expr_text(r)}")
        ok = ok and not bad
        print(f"{name}: {'ok' if not bad else 'FAILED'} ({len(res)} grades checked, m = {args.order})")
    return EXIT_OK if ok else EXIT_CHECK


def _cmd_compare(args, problem) -> int:
    report = error_table(problem, args.order, args.grid)
    with _sink(args.out) as out:
        report.write_csv(out)
    for label, value in (("cadm", report.max_err_cadm), ("crdtm", report.max_err_crdtm)):
        if value is not None:
            print(f"max |{label} - exact| = {value:.6e}", file=sys.stderr)
    if args.check_equivalence:
        mismatched = methods_agree(report)
        if mismatched:
            r = mismatched[0]
            print(f"methods disagree at x={r.x!r}, t={r.t!r}: {r.cadm!r} vs {r.crdtm!r}",
                  file=sys.stderr)
            return EXIT_CHECK
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "adomian":
            return _cmd_adomian(args)
        problem = load_problem(args.problem, args.alpha, args.beta)
    except ParseError as exc:
        print(f"cfpde: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    handler = {"solve": _cmd_solve, "terms": _cmd_terms,
               "check": _cmd_check, "compare": _cmd_compare}[args.command]
    try:
        return handler(args, problem)
    except (CfpdeError, ArithmeticError, ValueError) as exc:
        print(f"cfpde: {args.problem}: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
