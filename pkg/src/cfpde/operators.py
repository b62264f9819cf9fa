"""Operator trees for the split ``L u + R u + N u = g``.

Node kinds: :class:`Unknown` (``u``), :class:`SpaceDeriv` (a conformable
x-derivative of fixed order applied ``reps`` times), :class:`Add`,
:class:`Mul`, :class:`Scale` and :class:`ConstExpr` (a known function of
``x``).  Two semantics are offered:

* :func:`eval_lambda` reads ``u`` as ``sum_i lam**i * parts[i]`` and returns
  the lambda-polynomial of the operator's value; its coefficients are the
  Adomian polynomials.
* :func:`spectrum_coeff` reads ``u`` as the graded series ``sum_k U_k t**(k a)``
  and returns one grade of the operator's value via Cauchy products.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import syntax
from .errors import ExprError, OperatorError
from .kernel import ONE, ZERO, Expr, X, as_rational, canonicalize, conf_deriv, cos, exp, sin
from .kernel import to_text as expr_text
from .series import LambdaPoly, TSeries, cauchy_product


@dataclass(frozen=True)
class Unknown:
    pass


@dataclass(frozen=True)
class SpaceDeriv:
    child: "OperatorExpr"
    reps: int
    order: Fraction


@dataclass(frozen=True)
class Add:
    children: tuple


@dataclass(frozen=True)
class Mul:
    children: tuple


@dataclass(frozen=True)
class Scale:
    factor: Fraction
    child: "OperatorExpr"


@dataclass(frozen=True)
class ConstExpr:
    expr: Expr


OperatorExpr = Union[Unknown, SpaceDeriv, Add, Mul, Scale, ConstExpr]

U = Unknown()


# -- smart constructors -----------------------------------------------------
# They fold constant sub-trees and flatten nested Add/Mul/Scale, which is what
# keeps parse(print(op)) == op.

def const(e) -> ConstExpr:
    return ConstExpr(canonicalize(e))


def scale(q, child: OperatorExpr) -> OperatorExpr:
    q = as_rational(q, "scale factor")
    if q == 1:
        return child
    if isinstance(child, ConstExpr):
        return ConstExpr(child.expr * q)
    if isinstance(child, Scale):
        return scale(q * child.factor, child.child)
    return Scale(q, child)


def add(*ops: OperatorExpr) -> OperatorExpr:
    children = []
    for op in ops:
        children.extend(op.children if isinstance(op, Add) else (op,))
    if all(isinstance(c, ConstExpr) for c in children):
        return ConstExpr(Expr.sum(c.expr for c in children))
    return children[0] if len(children) == 1 else Add(tuple(children))


def mul(*ops: OperatorExpr) -> OperatorExpr:
    if all(isinstance(op, ConstExpr) for op in ops):
        prod = ONE
        for op in ops:
            prod = prod * op.expr
        return ConstExpr(prod)
    if len(ops) == 2:
        a, b = ops
        if isinstance(a, ConstExpr) and a.expr.is_constant:
            return scale(a.expr.constant_value, b)
        if isinstance(b, ConstExpr) and b.expr.is_constant:
            return scale(b.expr.constant_value, a)
    children = []
    for op in ops:
        children.extend(op.children if isinstance(op, Mul) else (op,))
    return children[0] if len(children) == 1 else Mul(tuple(children))


def deriv(child: OperatorExpr, order, reps: int = 1) -> OperatorExpr:
    order = as_rational(order, "derivative order")
    if not 0 < order <= 1:
        raise ExprError(f"conformable order {order} outside (0, 1]")
    if reps < 1:
        raise OperatorError("derivative repetition count must be positive")
    if isinstance(child, ConstExpr):
        e = child.expr
        for _ in range(reps):
            e = conf_deriv(e, order)
        return ConstExpr(e)
    if isinstance(child, SpaceDeriv) and child.order == order:
        return SpaceDeriv(child.child, child.reps + reps, order)
    return SpaceDeriv(child, reps, order)


# -- structure ----------------------------------------------------------------

def has_unknown(op: OperatorExpr) -> bool:
    if isinstance(op, Unknown):
        return True
    if isinstance(op, (Add, Mul)):
        return any(has_unknown(c) for c in op.children)
    if isinstance(op, (Scale, SpaceDeriv)):
        return has_unknown(op.child)
    return False


def check_linear(op: OperatorExpr) -> bool:
    """True iff ``op`` is linear in ``u`` (an additive known term is allowed)."""
    if isinstance(op, (Unknown, ConstExpr)):
        return True
    if isinstance(op, (Scale, SpaceDeriv)):
        return check_linear(op.child)
    if isinstance(op, Add):
        return all(check_linear(c) for c in op.children)
    bearing = [c for c in op.children if has_unknown(c)]
    return len(bearing) <= 1 and all(check_linear(c) for c in bearing)


def apply_linear(op: OperatorExpr, u: Expr) -> Expr:
    """Substitute ``u`` for the unknown in a linear operator."""
    if not check_linear(op):
        raise OperatorError("apply_linear needs an operator linear in u")
    return _apply(op, u)


def _apply(op, u):
    if isinstance(op, Unknown):
        return u
    if isinstance(op, ConstExpr):
        return op.expr
    if isinstance(op, Scale):
        return _apply(op.child, u) * op.factor
    if isinstance(op, SpaceDeriv):
        e = _apply(op.child, u)
        for _ in range(op.reps):
            e = conf_deriv(e, op.order)
        return e
    if isinstance(op, Add):
        return Expr.sum(_apply(c, u) for c in op.children)
    prod = ONE
    for c in op.children:
        prod = prod * _apply(c, u)
    return prod


# -- coefficient rings --------------------------------------------------------

@functools.singledispatch
def space_deriv(value, order: Fraction):
    """Conformable x-derivative lifted to a coefficient ring."""
    raise TypeError(f"no space derivative for {type(value).__name__}")


@space_deriv.register
def _(value: Expr, order):
    return conf_deriv(value, order)


@space_deriv.register
def _(value: TSeries, order):
    return value.map(lambda c: conf_deriv(c, order))


@functools.singledispatch
def lift_constant(like, e: Expr):
    """Embed the known function ``e`` into the ring that ``like`` lives in."""
    raise TypeError(f"cannot embed a constant next to {type(like).__name__}")


@lift_constant.register
def _(like: Expr, e):
    return e


@lift_constant.register
def _(like: TSeries, e):
    return TSeries(like.alpha, (e,) + (ZERO,) * (len(like.coeffs) - 1))


def eval_lambda(op: OperatorExpr, parts: Sequence) -> LambdaPoly:
    """Value of ``op`` at ``u = sum_i lam**i parts[i]`` modulo ``lam**len(parts)``.

    Coefficient ``i`` of the result is the Adomian polynomial ``A_i``.
    ``parts`` may be Exprs, TSeries, or any ring registered with
    :func:`space_deriv` and :func:`lift_constant`.
    """
    parts = tuple(parts)
    if not parts:
        raise OperatorError("eval_lambda needs at least one part")
    like = parts[0]
    zero = like * 0
    unknown = LambdaPoly(parts)

    def ev(node) -> LambdaPoly:
        if isinstance(node, Unknown):
            return unknown
        if isinstance(node, ConstExpr):
            return LambdaPoly((lift_constant(like, node.expr),) + (zero,) * (len(parts) - 1))
        if isinstance(node, Scale):
            return ev(node.child) * node.factor
        if isinstance(node, SpaceDeriv):
            def d(c):
                for _ in range(node.reps):
                    c = space_deriv(c, node.order)
                return c
            return ev(node.child).map(d)
        values = [ev(c) for c in node.children]
        acc = values[0]
        for v in values[1:]:
            acc = acc + v if isinstance(node, Add) else acc * v
        return acc

    return ev(op)


def spectrum_coeff(op: OperatorExpr, spectra: Sequence[Expr], k: int) -> Expr:
    """Grade-``k`` transform coefficient of ``op`` applied to ``sum_j spectra[j] t**(j a)``."""
    if k < 0 or len(spectra) < k + 1:
        raise OperatorError(f"grade {k} needs {k + 1} spectra, got {len(spectra)}")
    # grades combine independently of alpha, so any valid alpha serves here
    useries = TSeries(Fraction(1), tuple(spectra[: k + 1]))

    def tr(node) -> TSeries:
        if isinstance(node, Unknown):
            return useries
        if isinstance(node, ConstExpr):
            return TSeries(useries.alpha, (node.expr,))
        if isinstance(node, Scale):
            return tr(node.child) * node.factor
        if isinstance(node, SpaceDeriv):
            s = tr(node.child)
            for _ in range(node.reps):
                s = s.map(lambda c: conf_deriv(c, node.order))
            return s
        parts = [tr(c) for c in node.children]
        acc = parts[0]
        for p in parts[1:]:
            acc = acc + p if isinstance(node, Add) else cauchy_product(acc, p)
        return acc

    return tr(op).coeff(k)


# -- text form ------------------------------------------------------------------

_FUNCS = {"sin": sin, "cos": cos, "exp": exp}


def build_operator(raw: syntax.Node, alpha, beta) -> OperatorExpr:
    """Turn a parsed tree into an operator; ``Da``/``Db`` bind to alpha/beta."""
    if isinstance(raw, syntax.Num):
        return ConstExpr(Expr.const(raw.value))
    if isinstance(raw, syntax.Sym):
        if raw.name == "u":
            return U
        if raw.name == "x":
            return ConstExpr(X)
        raise ExprError(f"symbol {raw.name!r} is not allowed in an operator", raw.pos)
    if isinstance(raw, syntax.Neg):
        return scale(-1, build_operator(raw.operand, alpha, beta))
    if isinstance(raw, syntax.Call):
        child = build_operator(raw.arg, alpha, beta)
        if raw.func == "Da":
            return deriv(child, alpha)
        if raw.func == "Db":
            return deriv(child, beta)
        if raw.func == "Db2":
            return deriv(child, beta, 2)
        if not isinstance(child, ConstExpr):
            raise ExprError(f"u may not appear inside {raw.func}()", raw.pos)
        return ConstExpr(_FUNCS[raw.func](child.expr))
    left = build_operator(raw.left, alpha, beta)
    right = build_operator(raw.right, alpha, beta)
    try:
        if raw.op == "+":
            return add(left, right)
        if raw.op == "-":
            return add(left, scale(-1, right))
        if raw.op == "*":
            return mul(left, right)
        if raw.op == "/":
            if not isinstance(right, ConstExpr):
                raise ExprError("division by an expression containing u", raw.pos)
            if right.expr.is_constant:
                q = right.expr.constant_value
                if not q:
                    raise ExprError("division by zero", raw.pos)
                return scale(1 / q, left)
            return mul(left, ConstExpr(right.expr.reciprocal()))
        if not (isinstance(right, ConstExpr) and right.expr.is_constant):
            raise ExprError("exponent must be a rational constant", raw.pos)
        q = right.expr.constant_value
        if isinstance(left, ConstExpr):
            return ConstExpr(left.expr ** q)
        if q.denominator != 1 or q < 1:
            raise ExprError(f"power {q} of an expression in u must be a positive integer", raw.pos)
        return mul(*([left] * int(q)))
    except ExprError as exc:
        if exc.pos is None:
            exc.pos = raw.pos
        raise


def _named(order: Fraction, alpha: Fraction, beta: Fraction) -> str:
    if order == beta:
        return "Db"
    if order == alpha:
        return "Da"
    raise OperatorError(f"derivative order {order} is neither alpha nor beta")


def to_text(op: OperatorExpr, alpha, beta) -> str:
    """Problem-file text for ``op``; inverse of :func:`build_operator`."""
    alpha, beta = Fraction(alpha), Fraction(beta)

    def wrapped(node) -> str:
        text = render(node)
        if isinstance(node, (Add, Mul, Scale, ConstExpr)):
            return f"({text})"
        return text

    def render(node) -> str:
        if isinstance(node, Unknown):
            return "u"
        if isinstance(node, ConstExpr):
            return expr_text(node.expr)
        if isinstance(node, SpaceDeriv):
            name = _named(node.order, alpha, beta)
            text, reps = render(node.child), node.reps
            while name == "Db" and reps >= 2:
                text, reps = f"Db2({text})", reps - 2
            for _ in range(reps):
                text = f"{name}({text})"
            return text
        if isinstance(node, Scale):
            if node.factor == -1:
                return f"-{wrapped(node.child)}"
            q = node.factor
            qt = str(q) if q.denominator == 1 and q > 0 else f"({q})"
            return f"{qt}*{wrapped(node.child)}"
        if isinstance(node, Mul):
            return "*".join(wrapped(c) for c in node.children)
        pieces = []
        for i, c in enumerate(node.children):
            if i and isinstance(c, Scale) and c.factor < 0:
                flipped = scale(-c.factor, c.child)
                text = wrapped(flipped) if isinstance(flipped, (Add, ConstExpr)) else render(flipped)
                pieces.append(f" - {text}")
            elif i:
                pieces.append(f" + {wrapped(c) if isinstance(c, (Add, ConstExpr)) else render(c)}")
            else:
                pieces.append(wrapped(c) if isinstance(c, ConstExpr) else render(c))
        return "".join(pieces)

    return render(op)
