import random
from fractions import Fraction as F

import pytest

from cfpde.errors import DomainError, SeriesError
from cfpde.kernel import ONE, X, ZERO, Expr, xpow
from cfpde.series import (
    LambdaPoly, TSeries, cauchy_product, grade_of_power, inv_L_series, lambda_product,
    series_eval, time_derivative,
)
from helpers import ORDERS, random_expr


def test_grade_placement():
    assert grade_of_power(F(3, 2), F(1, 2)) == 3
    assert grade_of_power(0, F(1, 3)) == 0
    with pytest.raises(SeriesError):
        grade_of_power(F(1, 2), F(1, 3))
    with pytest.raises(SeriesError):
        grade_of_power(-1, 1)


@pytest.mark.parametrize("alpha", [0, F(-1, 2), F(3, 2)])
def test_alpha_range(alpha):
    with pytest.raises(SeriesError):
        TSeries(alpha, (ONE,))


def test_mixed_alpha_refused():
    with pytest.raises(SeriesError):
        TSeries(F(1, 2), (ONE,)) + TSeries(F(1, 3), (ONE,))


def test_inverse_then_derivative_is_identity():
    rng = random.Random(5)
    for _ in range(200):
        alpha = rng.choice(ORDERS)
        n = rng.randint(1, 7)
        s = TSeries(alpha, tuple(random_expr(rng) for _ in range(n)))
        assert time_derivative(inv_L_series(s)) == s


def test_inv_L_single_grade():
    s = inv_L_series(TSeries(F(1, 2), (ZERO, X)))
    # x t^(1/2) integrates to x t / (2 * 1/2)
    assert s.coeffs == (ZERO, ZERO, X)


def test_cauchy_product_keeps_longer_length():
    a = TSeries(F(1, 2), (ONE, X, xpow(2)))
    unit = TSeries(F(1, 2), (ONE,))
    assert cauchy_product(a, unit) == a
    assert cauchy_product(unit, a) == a
    sq = cauchy_product(a, a)
    assert sq.coeffs == (ONE, 2 * X, 3 * xpow(2))


def test_cauchy_product_is_commutative_and_associative():
    rng = random.Random(9)
    for _ in range(40):
        a, b, c = (TSeries(1, tuple(random_expr(rng, 2) for _ in range(4))) for _ in range(3))
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)


def test_truncate_pads_and_cuts():
    s = TSeries(1, (ONE, X))
    assert s.truncate(3).coeffs == (ONE, X, ZERO, ZERO)
    assert s.truncate(0).coeffs == (ONE,)
    assert s.truncate(3).trim() == s


def test_series_eval():
    s = TSeries(F(1, 2), (ONE, X))
    assert series_eval(s, 2.0, 0.0) == 1.0
    assert series_eval(s, 2.0, 4.0) == 5.0
    with pytest.raises(DomainError):
        series_eval(s, 1.0, -0.1)
    with pytest.raises(DomainError):
        series_eval(s, 0.0, 1.0)


def test_lambda_product_truncates():
    a = LambdaPoly((ONE, X, ZERO))
    p = lambda_product(a, a)
    assert p.coeffs == (ONE, 2 * X, xpow(2))
    with pytest.raises(SeriesError):
        lambda_product(a, LambdaPoly((ONE,)))
    assert (a * 3).coeffs == (Expr.const(3), 3 * X, ZERO)
