"""Problem model, the ``.fpde`` text format, and the shipped examples.

A problem file is a list of ``key = "value"`` lines (``#`` starts a
comment).  Keys: ``name``, ``alpha``, ``beta``, ``R``, ``N``, ``g``,
``ic``, ``exact``; the first five of ``name alpha beta R ic`` are required.
``alpha`` and ``beta`` are quoted rationals ``"p/q"`` in ``(0, 1]``.  The
letters ``a`` and ``b`` inside expressions stand for those two values.
See ``docs/fpde-format.md`` for the full grammar.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import operators as ops
from . import syntax
from .errors import DomainError, ExprError, NoReferenceError, ParseError, SeriesError
from .kernel import ONE, Expr, canonicalize
from .kernel import to_text as expr_text
from .operators import OperatorExpr, apply_linear, build_operator, check_linear
from .series import TSeries, grade_of_power

BUILTINS = ("diffusion", "gas", "advection")
KEYS = ("name", "alpha", "beta", "R", "N", "g", "ic", "exact")
REQUIRED = ("name", "alpha", "beta", "R", "ic")

_LINE = re.compile(r'^\s*([A-Za-z_]\w*)\s*=\s*"([^"]*)"\s*(?:#.*)?$')
_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


@dataclass(frozen=True)
class ExactSolution:
    """Closed-form reference ``u(x, t)`` kept as a parsed tree."""

    tree: syntax.Node

    def __call__(self, x: float, t: float) -> float:
        return _evaluate(self.tree, x, t)

    @property
    def text(self) -> str:
        return syntax.to_text(self.tree)


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    alpha: Fraction
    beta: Fraction
    ic: Expr
    R: OperatorExpr
    N: OperatorExpr | None
    g: TSeries
    exact: ExactSolution | None = None

    def __post_init__(self):
        for label in ("alpha", "beta"):
            value = getattr(self, label)
            if not isinstance(value, Fraction) or not 0 < value <= 1:
                raise ParseError(f"{label} = {value} must be a rational in (0, 1]")
        if self.g.alpha != self.alpha:
            raise ParseError("source series is graded with a different alpha")
        problem = _split_problem(self.R, self.N)
        if problem:
            raise ParseError(problem[1])


def _split_problem(R, N) -> tuple[str, str] | None:
    if not check_linear(R):
        return "R", "R must be linear in u (move nonlinear terms to N)"
    if not apply_linear(R, Expr()).is_zero:
        return "R", "R has a term without u; move it to the source g"
    if N is not None and check_linear(N):
        return "N", "N must be nonlinear in u (move linear terms to R)"
    return None


# -- numeric evaluation of exact solutions ----------------------------------------

_MATH = {"sin": math.sin, "cos": math.cos, "exp": math.exp}


def _evaluate(node, x: float, t: float) -> float:
    if isinstance(node, syntax.Num):
        return float(node.value)
    if isinstance(node, syntax.Sym):
        return x if node.name == "x" else t
    if isinstance(node, syntax.Neg):
        return -_evaluate(node.operand, x, t)
    if isinstance(node, syntax.Call):
        return _MATH[node.func](_evaluate(node.arg, x, t))
    a, b = _evaluate(node.left, x, t), _evaluate(node.right, x, t)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return a ** b


def exact_eval(p: ProblemSpec, x: float, t: float) -> float:
    if p.exact is None:
        raise NoReferenceError(f"problem {p.name!r} has no exact solution")
    if not x > 0:
        raise DomainError(f"x = {x!r} is outside the conformable domain x > 0")
    if not t >= 0:
        raise DomainError(f"t = {t!r} is negative")
    return p.exact(x, t)


# -- source terms -------------------------------------------------------------------

def _graded(node, alpha: Fraction) -> dict[int, Expr]:
    """Split a source ``g(x, t)`` into ``{grade: coefficient}``."""
    if "t" not in syntax.symbols(node):
        return {0: canonicalize(node)}
    if isinstance(node, syntax.Sym):
        return {_grade(Fraction(1), alpha, node): ONE}
    if isinstance(node, syntax.Neg):
        return {k: -c for k, c in _graded(node.operand, alpha).items()}
    if isinstance(node, syntax.BinOp):
        if node.op in "+-":
            out = dict(_graded(node.left, alpha))
            for k, c in _graded(node.right, alpha).items():
                out[k] = out.get(k, Expr()) + (c if node.op == "+" else -c)
            return out
        if node.op == "*":
            left, right = _graded(node.left, alpha), _graded(node.right, alpha)
            out: dict[int, Expr] = {}
            for i, a in left.items():
                for j, b in right.items():
                    out[i + j] = out.get(i + j, Expr()) + a * b
            return out
        if node.op == "/":
            if "t" in syntax.symbols(node.right):
                raise ExprError("g may not divide by an expression in t", node.pos)
            d = canonicalize(node.right)
            return {k: c / d for k, c in _graded(node.left, alpha).items()}
        if node.op == "^":
            q = canonicalize(node.right)
            if not q.is_constant:
                raise ExprError("non-rational exponent", node.pos)
            q = q.constant_value
            if isinstance(node.left, syntax.Sym):
                return {_grade(q, alpha, node): ONE}
            if q.denominator == 1 and q >= 0:
                base = _graded(node.left, alpha)
                out = {0: ONE}
                for _ in range(int(q)):
                    out = _graded_mul(out, base)
                return out
    raise ExprError("t may only enter g through powers t^q", getattr(node, "pos", None))


def _graded_mul(a: dict, b: dict) -> dict:
    out: dict[int, Expr] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, Expr()) + x * y
    return out


def _grade(q: Fraction, alpha: Fraction, node) -> int:
    try:
        return grade_of_power(q, alpha)
    except SeriesError as exc:
        raise ExprError(str(exc), node.pos) from None


def source_series(node, alpha: Fraction) -> TSeries:
    graded = _graded(node, alpha)
    top = max(graded) if graded else 0
    return TSeries(alpha, tuple(graded.get(k, Expr()) for k in range(top + 1))).trim()


# -- parsing ----------------------------------------------------------------------------

def _rational(text: str, label: str) -> Fraction:
    m = _RATIONAL.match(text)
    if m is None:
        raise ValueError(f"{label} must be a quoted rational like \"1/2\", got {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ValueError(f"{label} has a zero denominator")
    value = Fraction(num, den)
    if not 0 < value <= 1:
        raise ValueError(f"{label} = {value} is out of range (0, 1]")
    return value


def _coerce_override(value, label: str) -> Fraction:
    if isinstance(value, Fraction):
        value = str(value)
    try:
        return _rational(str(value), label)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_problem(text: str, alpha=None, beta=None, source: str | None = None) -> ProblemSpec:
    """Parse ``.fpde`` text; ``alpha``/``beta`` override the file's values."""
    entries: dict[str, tuple[str, int, int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE.match(line)
        if m is None:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError('expected key = "value"', lineno, col, source)
        key = m.group(1)
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, m.start(1) + 1, source)
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", lineno, m.start(1) + 1, source)
        entries[key] = (m.group(2), lineno, m.start(2) + 1)
    for key in REQUIRED:
        if key not in entries:
            raise ParseError(f"missing required key {key!r}", source=source)

    def fail(key: str, message: str, offset: int = 0):
        _, lineno, col = entries[key]
        return ParseError(message, lineno, col + offset, source)

    params = {}
    for key, override in (("alpha", alpha), ("beta", beta)):
        if override is not None:
            params[key] = _coerce_override(override, key)
            continue
        try:
            params[key] = _rational(entries[key][0], key)
        except ValueError as exc:
            raise fail(key, str(exc)) from None
    a, b = params["alpha"], params["beta"]

    def expression(key: str, allowed: set[str], required: bool = True):
        value = entries.get(key, ("", 0, 0))[0]
        if not value.strip():
            if required:
                raise fail(key, f"{key} is empty")
            return None
        try:
            tree = syntax.parse_expr(value, {"a": a, "b": b})
        except ParseError as exc:
            raise fail(key, exc.message, (exc.column or 1) - 1) from None
        extra = syntax.symbols(tree) - allowed
        if extra:
            raise fail(key, f"{key} may not use {', '.join(sorted(extra))}")
        return tree

    def convert(key: str, fn, tree):
        try:
            return fn(tree)
        except ExprError as exc:
            raise fail(key, str(exc), max(exc.pos or 0, 0)) from None

    ic = convert("ic", canonicalize, expression("ic", {"x"}))
    R = convert("R", lambda t: build_operator(t, a, b), expression("R", {"x", "u"}))
    n_tree = expression("N", {"x", "u"}, required=False) if "N" in entries else None
    N = None if n_tree is None else convert("N", lambda t: build_operator(t, a, b), n_tree)
    g_tree = expression("g", {"x", "t"}, required=False) if "g" in entries else None
    g = TSeries(a) if g_tree is None else convert("g", lambda t: source_series(t, a), g_tree)
    exact = None
    if "exact" in entries:
        e_tree = expression("exact", {"x", "t"}, required=False)
        exact = None if e_tree is None else ExactSolution(e_tree)
    problem = _split_problem(R, N)
    if problem:
        raise fail(*problem)
    return ProblemSpec(entries["name"][0], a, b, ic, R, N, g, exact)


def format_problem(p: ProblemSpec) -> str:
    """Text form of ``p``; :func:`parse_problem` reads it back to an equal spec."""
    g_terms = []
    for k, c in enumerate(p.g.coeffs):
        if c.is_zero:
            continue
        g_terms.append(f"({expr_text(c)})" if k == 0 else f"({expr_text(c)})*t^({k * p.alpha})")
    lines = [
        f'name = "{p.name}"',
        f'alpha = "{p.alpha}"',
        f'beta = "{p.beta}"',
        f'R = "{ops.to_text(p.R, p.alpha, p.beta)}"',
        f'N = "{"" if p.N is None else ops.to_text(p.N, p.alpha, p.beta)}"',
        f'g = "{" + ".join(g_terms) or "0"}"',
        f'ic = "{expr_text(p.ic)}"',
    ]
    if p.exact is not None:
        lines.append(f'exact = "{p.exact.text}"')
    return "\n".join(lines) + "\n"


def builtin_text(name: str) -> str:
    if name not in BUILTINS:
        raise ParseError(f"unknown built-in problem {name!r}; choose from {', '.join(BUILTINS)}")
    return resources.files("cfpde").joinpath("builtin", f"{name}.fpde").read_text()


def builtin(name: str, alpha=None, beta=None) -> ProblemSpec:
    """One of the shipped problems, optionally with other alpha/beta."""
    return parse_problem(builtin_text(name), alpha, beta, source=f"{name}.fpde")


def load_problem(ref: str, alpha=None, beta=None) -> ProblemSpec:
    """Load ``ref`` as a file path, falling back to a built-in name.

    A bare ``gas.fpde`` that is not on disk also resolves to the built-in.
    """
    path = Path(ref)
    if path.is_file():
        return parse_problem(path.read_text(), alpha, beta, source=str(path))
    if ref in BUILTINS:
        return builtin(ref, alpha, beta)
    if path.suffix == ".fpde" and path.stem in BUILTINS and path.name == ref:
        return builtin(path.stem, alpha, beta)
    raise ParseError(f"no problem file or built-in named {ref!r}")
