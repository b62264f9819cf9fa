"""Graded fractional power series in ``t`` and truncated lambda-polynomials.

A :class:`TSeries` holds ``sum_k coeffs[k](x) * t**(k*alpha)`` with the time
origin fixed at zero.  Only grades are stored, so every time power must be
a non-negative integer multiple of ``alpha`` (see :func:`grade_of_power`).

A :class:`LambdaPoly` holds ``sum_i coeffs[i] * lam**i`` modulo
``lam**(order+1)``.  Its coefficients are whatever ring the caller feeds
in: :class:`~cfpde.kernel.Expr`, :class:`TSeries`, or the formal symbols
used to print Adomian polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .errors import DomainError, SeriesError
from .kernel import ZERO, Expr, as_rational, eval_at


def grade_of_power(q, alpha) -> int:
    """Grade ``k`` with ``k*alpha == q``; non-multiples are refused.

    This is the placement rule for a monomial source ``x**m * t**q``:
    its transform is ``x**m`` at grade ``q/alpha`` and zero elsewhere.
    """
    k = Fraction(q) / Fraction(alpha)
    if k.denominator != 1 or k < 0:
        raise SeriesError(
            f"t^({q}) is not a non-negative integer multiple of t^({alpha})"
        )
    return int(k)


@dataclass(frozen=True)
class TSeries:
    alpha: Fraction
    coeffs: tuple[Expr, ...] = ()

    def __post_init__(self):
        alpha = as_rational(self.alpha, "alpha")
        if not 0 < alpha <= 1:
            raise SeriesError(f"alpha = {alpha} outside (0, 1]")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Expr:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def truncate(self, m: int) -> "TSeries":
        """Keep grades ``0..m``, padding with zeros when shorter."""
        cs = self.coeffs[: m + 1]
        return TSeries(self.alpha, cs + (ZERO,) * (m + 1 - len(cs)))

    def trim(self) -> "TSeries":
        cs = list(self.coeffs)
        while cs and cs[-1].is_zero:
            cs.pop()
        return TSeries(self.alpha, tuple(cs))

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def map(self, fn: Callable[[Expr], Expr]) -> "TSeries":
        return TSeries(self.alpha, tuple(fn(c) for c in self.coeffs))

    def _check(self, other: "TSeries") -> None:
        if other.alpha != self.alpha:
            raise SeriesError(f"alpha mismatch: {self.alpha} vs {other.alpha}")

    def __add__(self, other: "TSeries") -> "TSeries":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return TSeries(self.alpha, tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    def __neg__(self) -> "TSeries":
        return self.map(lambda c: -c)

    def __sub__(self, other: "TSeries") -> "TSeries":
        return self + (-other)

    def __mul__(self, other) -> "TSeries":
        if isinstance(other, TSeries):
            return cauchy_product(self, other)
        return self.map(lambda c: c * other)

    __rmul__ = __mul__

    def __str__(self):
        return " + ".join(
            f"({c})*t^({k * self.alpha})" for k, c in enumerate(self.coeffs) if not c.is_zero
        ) or "0"


def inv_L_series(s: TSeries) -> TSeries:
    """Apply ``f -> int_0^t xi**(alpha-1) f(xi) dxi`` grade by grade.

    ``c * t**(k*alpha)`` integrates to ``c * t**((k+1)*alpha) / ((k+1)*alpha)``.
    """
    a = s.alpha
    return TSeries(a, (ZERO,) + tuple(c / ((k + 1) * a) for k, c in enumerate(s.coeffs)))


def time_derivative(s: TSeries) -> TSeries:
    """Conformable time derivative of order ``alpha``: grade k gets ``alpha*(k+1)*c[k+1]``."""
    a = s.alpha
    return TSeries(a, tuple(s.coeffs[k + 1] * ((k + 1) * a) for k in range(len(s.coeffs) - 1)))


def cauchy_product(a: TSeries, b: TSeries) -> TSeries:
    """Grade-wise convolution, keeping as many grades as the longer factor.

    Missing grades of the shorter factor are zero, so ``[1]`` is the unit.
    """
    if a.alpha != b.alpha:
        raise SeriesError(f"alpha mismatch: {a.alpha} vs {b.alpha}")
    la, lb = len(a.coeffs), len(b.coeffs)
    n = max(la, lb)
    out = []
    for k in range(n):
        out.append(Expr.sum(
            a.coeffs[s] * b.coeffs[k - s]
            for s in range(max(0, k - lb + 1), min(k, la - 1) + 1)
        ))
    return TSeries(a.alpha, tuple(out))


def series_eval(s: TSeries, x: float, t: float) -> float:
    """``sum_k c_k(x) * t**(k*alpha)`` at a point with ``x > 0``, ``t >= 0``."""
    if not t >= 0:
        raise DomainError(f"t = {t!r} is negative")
    if not x > 0:
        raise DomainError(f"x = {x!r} is outside the conformable domain x > 0")
    a = float(s.alpha)
    return math.fsum(
        eval_at(c, x) * (t ** (k * a) if k else 1.0)
        for k, c in enumerate(s.coeffs)
        if not c.is_zero
    )


@dataclass(frozen=True)
class LambdaPoly:
    """Polynomial in the bookkeeping parameter, truncated after ``order``."""

    coeffs: tuple[Any, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise SeriesError("a lambda-polynomial needs at least one coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        _same_order(self, other)
        return LambdaPoly(tuple(p + q for p, q in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other) -> "LambdaPoly":
        if isinstance(other, LambdaPoly):
            return lambda_product(self, other)
        return LambdaPoly(tuple(c * other for c in self.coeffs))

    def map(self, fn: Callable[[Any], Any]) -> "LambdaPoly":
        return LambdaPoly(tuple(fn(c) for c in self.coeffs))


def _same_order(a: LambdaPoly, b: LambdaPoly) -> None:
    if len(a.coeffs) != len(b.coeffs):
        raise SeriesError(f"truncation orders differ: {a.order} vs {b.order}")


def lambda_product(a: LambdaPoly, b: LambdaPoly) -> LambdaPoly:
    """Product in the quotient ring modulo ``lam**(order+1)``."""
    _same_order(a, b)
    m = a.order
    out: list = [None] * (m + 1)
    for i, p in enumerate(a.coeffs):
        for j in range(m + 1 - i):
            term = p * b.coeffs[j]
            out[i + j] = term if out[i + j] is None else out[i + j] + term
    return LambdaPoly(tuple(out))
