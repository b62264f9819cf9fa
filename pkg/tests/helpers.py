"""Random expression generators shared by the test modules."""

import random
from fractions import Fraction as F

from hypothesis import strategies as st

from cfpde.kernel import Expr, cos, exp, sin, xpow

ORDERS = [F(1), F(1, 2), F(1, 3), F(2, 3), F(3, 4), F(2, 5), F(4, 5), F(1, 7)]
POWERS = [F(-1), F(-1, 2), F(0), F(1, 3), F(1, 2), F(1), F(3, 2), F(2), F(5, 2), F(3)]
ARG_POWERS = [F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1)]
COEFFS = [F(-3), F(-2), F(-1), F(-1, 2), F(1, 3), F(1), F(3, 2), F(2), F(5)]


def random_atom(rng: random.Random) -> Expr:
    """A single monomial: c * x^q * (optional exp/sin/cos of a small argument)."""
    e = Expr.const(rng.choice(COEFFS)) * xpow(rng.choice(POWERS))
    kind = rng.randrange(4)
    if kind:
        arg = Expr.const(rng.choice([F(-1), F(1, 2), F(1), F(2)])) * xpow(rng.choice(ARG_POWERS))
        e = e * (exp, sin, cos)[kind - 1](arg)
    return e


def random_expr(rng: random.Random, terms: int = 3) -> Expr:
    return Expr.sum(random_atom(rng) for _ in range(rng.randint(1, terms)))


def random_monomial(rng: random.Random) -> Expr:
    """Nonzero, trig-free: invertible by ``reciprocal``."""
    e = Expr.const(rng.choice(COEFFS)) * xpow(rng.choice(POWERS))
    if rng.random() < 0.5:
        e = e * exp(Expr.const(rng.choice([F(-1), F(1)])) * xpow(rng.choice(ARG_POWERS)))
    return e


@st.composite
def exprs(draw, max_terms: int = 3) -> Expr:
    seed = draw(st.integers(0, 2**32 - 1))
    return random_expr(random.Random(seed), max_terms)


orders = st.sampled_from(ORDERS)
