from fractions import Fraction as F

import pytest
import sympy as sp

from cfpde import syntax
from cfpde.errors import ExprError, OperatorError, ParseError
from cfpde.kernel import ONE, X, ZERO, canonicalize, conf_deriv, xpow
from cfpde.operators import (
    U, ConstExpr, SpaceDeriv, apply_linear, build_operator, check_linear, deriv, eval_lambda,
    spectrum_coeff, to_text,
)

HALF, THIRD = F(1, 2), F(1, 3)


def op(text, alpha=HALF, beta=THIRD):
    return build_operator(syntax.parse_expr(text, {"a": alpha, "b": beta}), alpha, beta)


def test_parser_positions_and_errors():
    with pytest.raises(ParseError) as err:
        syntax.parse_expr("1 + * x")
    assert err.value.column == 5
    with pytest.raises(ParseError):
        syntax.parse_expr("foo(x)")
    with pytest.raises(ParseError):
        syntax.parse_expr("(x")
    assert syntax.parse_expr("-x^2") == syntax.Neg(
        syntax.BinOp("^", syntax.Sym("x"), syntax.Num(F(2)))
    )
    assert syntax.parse_expr("2^-1") == syntax.Num(F(1, 2))


@pytest.mark.parametrize("text", [
    "x^(1/2) - (1/2)", "-(x + 1)*2", "sin(x)/(x - 1)^(-2)", "exp(-x^(1/3)/(1/3))", "-x^2",
])
def test_syntax_round_trip(text):
    tree = syntax.parse_expr(text)
    assert syntax.parse_expr(syntax.to_text(tree)) == tree


def test_apply_linear_example():
    u = canonicalize("(x^(1/2) - 1/2)/1")
    assert apply_linear(SpaceDeriv(U, 1, HALF), u) == canonicalize("1/2")


def test_derivative_nodes_bind_orders():
    assert op("Db2(u)") == SpaceDeriv(U, 2, THIRD)
    assert op("Db(Db(u))") == op("Db2(u)")
    assert op("Da(u)") == SpaceDeriv(U, 1, HALF)
    assert op("Db(x^3)") == ConstExpr(conf_deriv(xpow(3), THIRD))


def test_linearity_classification():
    assert check_linear(op("-Db2(u) + x*u + 3"))
    assert not check_linear(op("u*Db(u)"))
    assert not check_linear(op("u^2"))
    with pytest.raises(OperatorError):
        apply_linear(op("u^2"), X)


def test_bad_operators():
    with pytest.raises(ExprError):
        op("u/u")
    with pytest.raises(ExprError):
        op("sin(u)")
    with pytest.raises(ExprError):
        op("t*u")


@pytest.mark.parametrize("text", ["-Db2(u)", "u*Db(u) + u^2", "Da(u) - x*u", "-(u + Db(u))*3"])
def test_operator_text_round_trip(text):
    o = op(text)
    assert op(to_text(o, HALF, THIRD)) == o


def test_eval_lambda_matches_sympy_expansion():
    # N(u) = u^2 * Db(u) with u = u0 + lam*u1 + lam^2*u2, parts concrete
    parts = [canonicalize(s) for s in ("x", "x^2", "exp(x)")]
    got = eval_lambda(op("u^2*Db(u)"), parts).coeffs
    x, lam = sp.symbols("x lam", positive=True)
    sparts = [x, x**2, sp.exp(x)]
    Tb = lambda f: x ** (1 - sp.Rational(1, 3)) * sp.diff(f, x)
    total = sum(lam**i * p for i, p in enumerate(sparts))
    series = sp.expand(total**2 * Tb(total))
    for i, g in enumerate(got):
        want = series.coeff(lam, i)
        text = str(g).replace("^", "**")
        assert sp.simplify(sp.sympify(text, locals={"x": x}) - want) == 0


def test_spectrum_coeff():
    spectra = [X, ONE, ZERO]
    # (x + t^a)^2 -> x^2, 2x, 1
    assert [spectrum_coeff(op("u^2"), spectra, k) for k in range(3)] == [xpow(2), 2 * X, ONE]
    with pytest.raises(OperatorError):
        spectrum_coeff(op("u"), spectra, 3)


def test_deriv_validates_order():
    with pytest.raises(ExprError):
        deriv(U, F(2))
