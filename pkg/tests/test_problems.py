from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from cfpde.errors import DomainError, NoReferenceError, ParseError
from cfpde.kernel import canonicalize
from cfpde.problems import (
    BUILTINS, builtin, exact_eval, format_problem, load_problem, parse_problem,
)
from oracles import fd_pde_residual

BASE = '''name = "p"
alpha = "1/2"
beta = "1/3"
R = "-Db2(u)"
ic = "sin(x)"
'''


def err(text):
    with pytest.raises(ParseError) as info:
        parse_problem(text, source="p.fpde")
    return info.value


def test_minimal_problem():
    p = parse_problem(BASE)
    assert (p.alpha, p.beta, p.N, p.exact) == (F(1, 2), F(1, 3), None, None)
    assert p.g.is_zero
    assert p.ic == canonicalize("sin(x)")


def test_error_loci():
    e = err(BASE.replace('R = "-Db2(u)"', 'R = "-Db2(u) + * u"'))
    assert (e.line, e.column) == (4, 16)
    assert str(e).startswith("p.fpde:4:16:")
    e = err(BASE + 'colour = "red"\n')
    assert (e.line, e.column, "unknown key" in e.message) == (6, 1, True)
    assert "duplicate" in err(BASE + 'ic = "x"\n').message
    assert "missing" in err(BASE.replace('ic = "sin(x)"\n', "")).message
    assert err(BASE + "junk\n").line == 6


@pytest.mark.parametrize("alpha", ['"0"', '"3/2"', '"0.5"', '"a"', '"1/0"'])
def test_bad_alpha(alpha):
    e = err(BASE.replace('alpha = "1/2"', f"alpha = {alpha}"))
    assert e.line == 2


@pytest.mark.parametrize("edit,key_line", [
    (('R = "-Db2(u)"', 'R = "u*Db(u)"'), 4),        # nonlinear R
    (('R = "-Db2(u)"', 'R = "-Db2(u) + x"'), 4),    # inhomogeneous R
    (('ic = "sin(x)"', 'ic = "sin(x)*u"'), 5),      # u in the initial condition
    (('ic = "sin(x)"', 'ic = "x^t"'), 5),
])
def test_semantic_errors(edit, key_line):
    assert err(BASE.replace(*edit)).line == key_line


def test_linear_N_refused():
    assert err(BASE + 'N = "x*u"\n').line == 6


def test_source_grades_must_align():
    e = err(BASE + 'g = "t^(1/3)"\n')
    assert e.line == 6
    p = parse_problem(BASE + 'g = "x*t + 3"\n')
    assert p.g.coeffs == (canonicalize("3"), canonicalize("0"), canonicalize("x"))


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(BUILTINS),
    st.fractions(min_value=F(1, 9), max_value=1, max_denominator=9),
    st.fractions(min_value=F(1, 9), max_value=1, max_denominator=9),
)
def test_format_round_trip(name, alpha, beta):
    p = builtin(name, alpha, beta)
    text = format_problem(p)
    q = parse_problem(text)
    assert q == p
    assert format_problem(q) == text


def test_overrides_and_lookup(tmp_path):
    assert builtin("gas", "1/3", F(1)).alpha == F(1, 3)
    f = tmp_path / "mine.fpde"
    f.write_text(BASE)
    assert load_problem(str(f)).name == "p"
    assert load_problem("advection.fpde").name == "advection"
    with pytest.raises(ParseError):
        load_problem("nope")
    with pytest.raises(ParseError):
        builtin("gas", "2")


def test_exact_eval():
    p = builtin("gas", 1, 1)
    assert exact_eval(p, 1.0, 0.5) == pytest.approx(0.6065306597126334)
    with pytest.raises(DomainError):
        exact_eval(p, 0.0, 0.5)
    with pytest.raises(NoReferenceError):
        exact_eval(parse_problem(BASE), 1.0, 1.0)


@pytest.mark.parametrize("name", BUILTINS)
@pytest.mark.parametrize("alpha,beta", [(F(1), F(1)), (F(1, 2), F(1, 2)), (F(3, 4), F(2, 3))])
def test_exact_solutions_satisfy_pde_by_fd(name, alpha, beta):
    p = builtin(name, alpha, beta)
    worst = max(
        fd_pde_residual(p, 0.5 + 1.5 * i / 9, 0.1 + 0.9 * j / 9)
        for i in range(10) for j in range(10)
    )
    assert worst < 1e-5


def _sym_exact(p):
    x, t = sp.symbols("x t", positive=True)
    return x, t, sp.sympify(p.exact.text.replace("^", "**"), locals={"x": x, "t": t})


@pytest.mark.parametrize("alpha,beta", [(F(1, 2), F(1, 2)), (F(2, 3), F(1, 4))])
def test_exact_solutions_symbolically(alpha, beta):
    a, b = sp.Rational(alpha.numerator, alpha.denominator), sp.Rational(beta.numerator, beta.denominator)
    Tt = lambda f, t: t ** (1 - a) * sp.diff(f, t)
    Tx = lambda f, x, o: x ** (1 - o) * sp.diff(f, x)

    x, t, u = _sym_exact(builtin("diffusion", alpha, beta))
    assert sp.simplify(Tt(u, t) - Tx(Tx(u, x, b), x, b)) == 0
    x, t, u = _sym_exact(builtin("gas", alpha, beta))
    assert sp.simplify(Tt(u, t) + u * Tx(u, x, b) + u**2 - u) == 0
    x, t, u = _sym_exact(builtin("advection", alpha, beta))
    assert sp.simplify(Tt(u, t) + (1 + u) * Tx(u, x, a)) == 0
    assert sp.simplify(u.subs(t, 0) - (x**a - a) / (2 * a)) == 0
