import random
from fractions import Fraction as F

import pytest

from cfpde import syntax
from cfpde.cadm import adomian_polynomials, cadm_iterates, cadm_solve, formal_parts
from cfpde.checks import residual_order
from cfpde.kernel import ZERO, equivalent
from cfpde.operators import build_operator
from cfpde.problems import builtin
from oracles import CLOSED_FORMS, adomian_oracle, formal_to_sympy, random_nonlinearity

HALF = F(1, 2)


def names_for(alpha, beta):
    return {alpha: "Da", beta: "Db"}


def adomian_text(text, alpha, beta, n=3):
    op = build_operator(syntax.parse_expr(text), alpha, beta)
    return [a.to_text(names_for(alpha, beta)) for a in adomian_polynomials(op, formal_parts(n))]


def test_gas_adomian_polynomials():
    assert adomian_text("u*Db(u) + u^2", HALF, HALF) == [
        "u0^2 + u0*Db(u0)",
        "2*u0*u1 + u0*Db(u1) + u1*Db(u0)",
        "2*u0*u2 + u0*Db(u2) + u1^2 + u1*Db(u1) + u2*Db(u0)",
        "2*u0*u3 + u0*Db(u3) + 2*u1*u2 + u1*Db(u2) + u2*Db(u1) + u3*Db(u0)",
    ]


def test_advection_adomian_polynomials():
    assert adomian_text("u*Da(u)", F(1, 3), HALF) == [
        "u0*Da(u0)",
        "u0*Da(u1) + u1*Da(u0)",
        "u0*Da(u2) + u1*Da(u1) + u2*Da(u0)",
        "u0*Da(u3) + u1*Da(u2) + u2*Da(u1) + u3*Da(u0)",
    ]


def test_random_nonlinearities_against_derivative_oracle():
    rng = random.Random(2024)
    beta = F(2, 5)
    for _ in range(20):
        monos, text = random_nonlinearity(rng)
        op = build_operator(syntax.parse_expr(text), HALF, beta)
        got = adomian_polynomials(op, formal_parts(5))
        want = adomian_oracle(monos, 5)
        for a, w in zip(got, want):
            assert formal_to_sympy(a, beta) == w, text


def test_linear_or_missing_nonlinearity():
    assert adomian_polynomials(None, formal_parts(2))[2].terms == ()


@pytest.mark.parametrize("name", ["diffusion", "gas", "advection"])
@pytest.mark.parametrize("alpha,beta", [(F(1), F(1)), (HALF, HALF), (F(3, 4), F(1, 3))])
def test_terms_are_single_grade_and_match_closed_forms(name, alpha, beta):
    p = builtin(name, alpha, beta)
    terms = cadm_iterates(p, 5)
    for n, u in enumerate(terms):
        assert all(c == ZERO for k, c in enumerate(u.coeffs) if k != n)
        assert equivalent(u.coeffs[n], CLOSED_FORMS[name](n, alpha, beta)).symbolic


def test_residual_order_full():
    for name in ("diffusion", "gas", "advection"):
        p = builtin(name)
        assert residual_order(p, cadm_solve(p, 7)) == 7


def test_order_zero_is_initial_condition():
    p = builtin("gas")
    assert cadm_solve(p, 0).coeffs == (p.ic,)
    with pytest.raises(ValueError):
        cadm_iterates(p, -1)
