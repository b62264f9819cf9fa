"""Exact symbolic expressions in the single spatial variable ``x``.

An :class:`Expr` is a canonical sum of terms ``c * f1 * f2 * ...`` where
``c`` is a :class:`~fractions.Fraction` and every factor is one of

* ``("x", q)``       -- ``x**q`` with rational ``q != 0``,
* ``("exp", arg)``   -- ``exp(arg)``,
* ``("sin", arg)`` / ``("cos", arg)``,

with ``arg`` itself an :class:`Expr`.  Canonical form merges like terms,
collects all powers of ``x`` into one factor and all exponentials into one
``exp`` of the summed argument, and orders factors as x-power, exp, sin,
cos (arguments compared by their own canonical order).  Two canonical
expressions are therefore structurally equal whenever they are equal
modulo the absence of trigonometric identities.
"""

from __future__ import annotations

import enum
import functools
import math
import random
from fractions import Fraction
from typing import Iterable, Union

from . import syntax
from .errors import DomainError, ExprError

Rational = Fraction
Scalar = Union[int, Fraction]

_RANK = {"x": 0, "exp": 1, "sin": 2, "cos": 3}
_ONE_Q = Fraction(1)


def _factor_key(f):
    if f[0] == "x":
        return (0, f[1], ())
    return (_RANK[f[0]], 0, f[1].sort_key)


def _mono_key(mono):
    return tuple(_factor_key(f) for f in mono)


def as_rational(value, what: str = "value") -> Fraction:
    """Coerce ``value`` to a Fraction, refusing floats and other junk."""
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise ExprError(f"{what} must be an exact rational, got {value!r}")
    return Fraction(value)


class Expr:
    """Immutable canonical expression; build with the module helpers.

    ``terms`` is a tuple of ``(monomial, coefficient)`` pairs sorted by
    monomial order; the monomial is a tuple of factors (see module doc).
    """

    __slots__ = ("terms", "_hash", "_key")

    def __init__(self, terms: tuple = ()):
        self.terms = terms
        self._hash = None
        self._key = None

    @classmethod
    def _from_dict(cls, acc: dict) -> "Expr":
        items = [(m, c) for m, c in acc.items() if c]
        if len(items) > 1:
            items.sort(key=lambda it: _mono_key(it[0]))
        return cls(tuple(items))

    @classmethod
    def const(cls, c: Scalar) -> "Expr":
        c = as_rational(c, "coefficient")
        return cls((((), c),)) if c else ZERO

    @classmethod
    def sum(cls, items: Iterable["Expr"]) -> "Expr":
        acc: dict = {}
        for e in items:
            for m, c in e.terms:
                acc[m] = acc.get(m, 0) + c
        return cls._from_dict(acc)

    # -- identity ---------------------------------------------------------
    @property
    def sort_key(self):
        if self._key is None:
            self._key = tuple((_mono_key(m), c) for m, c in self.terms)
        return self._key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expr.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self is other or self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not m for m, _ in self.terms)

    @property
    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ExprError(f"{self} is not a rational constant")
        return self.terms[0][1] if self.terms else Fraction(0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Expr":
        other = _coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return Expr._from_dict(acc)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other) -> "Expr":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Expr":
        return _coerce(other) - self

    def __mul__(self, other) -> "Expr":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return ZERO
            return Expr(tuple((m, c * other) for m, c in self.terms))
        other = _coerce(other)
        acc: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return Expr._from_dict(acc)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("division of an expression by zero")
            return self * (1 / Fraction(other))
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "Expr":
        return _coerce(other) * self.reciprocal()

    def reciprocal(self) -> "Expr":
        """``1/self`` for a single term free of sin/cos factors."""
        if len(self.terms) != 1:
            raise ExprError(f"cannot invert the sum {self}")
        mono, c = self.terms[0]
        q = Fraction(0)
        arg = None
        for f in mono:
            if f[0] == "x":
                q = -f[1]
            elif f[0] == "exp":
                arg = -f[1]
            else:
                raise ExprError(f"cannot invert {self}: trigonometric factor")
        return Expr(((_build_mono(q, arg, []), 1 / c),))

    def __pow__(self, q) -> "Expr":
        q = as_rational(q, "exponent")
        if q.denominator == 1:
            n = int(q)
            if n < 0:
                return self.reciprocal() ** -n
            result, base = ONE, self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        if not self.terms:
            if q > 0:
                return ZERO
            raise ZeroDivisionError("zero to a negative power")
        if len(self.terms) != 1:
            raise ExprError(f"non-integer power {q} of the sum {self}")
        mono, c = self.terms[0]
        coeff = _rational_power(c, q)
        xq = Fraction(0)
        arg = None
        for f in mono:
            if f[0] == "x":
                xq = f[1] * q
            elif f[0] == "exp":
                arg = f[1] * q
            else:
                raise ExprError(f"non-integer power {q} of a trigonometric factor")
        return Expr(((_build_mono(xq, arg, []), coeff),))

    def __repr__(self):
        return f"Expr({str(self)!r})"

    def __str__(self):
        return to_text(self)


def _coerce(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return Expr.const(as_rational(value, "operand"))


def _iroot(n: int, d: int) -> int | None:
    if n < 0:
        return None
    r = round(n ** (1.0 / d)) if n < 2 ** 1000 else int(math.exp(math.log(n) / d))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** d == n:
            return cand
    lo, hi = 0, 1 << (n.bit_length() // d + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** d < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** d == n else None


def _rational_power(c: Fraction, q: Fraction) -> Fraction:
    d = q.denominator
    sign = 1
    num = c.numerator
    if num < 0:
        if d % 2 == 0:
            raise ExprError(f"even root of negative coefficient {c}")
        sign, num = -1, -num
    rn, rd = _iroot(num, d), _iroot(c.denominator, d)
    if rn is None or rd is None:
        raise ExprError(f"{c}^{q} is not rational")
    return Fraction(sign * rn, rd) ** q.numerator


def _build_mono(q: Fraction, arg: Expr | None, trig: list) -> tuple:
    out = []
    if q:
        out.append(("x", q))
    if arg is not None and arg.terms:
        out.append(("exp", arg))
    if trig:
        trig.sort(key=_factor_key)
        out.extend(trig)
    return tuple(out)


@functools.lru_cache(maxsize=1 << 16)
def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    q = Fraction(0)
    arg = None
    trig = []
    for f in m1 + m2:
        kind = f[0]
        if kind == "x":
            q += f[1]
        elif kind == "exp":
            arg = f[1] if arg is None else arg + f[1]
        else:
            trig.append(f)
    return _build_mono(q, arg, trig)


ZERO = Expr(())
ONE = Expr((((), _ONE_Q),))


def xpow(q: Scalar = 1) -> Expr:
    q = as_rational(q, "exponent")
    if not q:
        return ONE
    return Expr(((((("x", q),)), _ONE_Q),))


X = xpow(1)


def exp(arg) -> Expr:
    arg = _coerce(arg)
    if not arg.terms:
        return ONE
    return Expr((((("exp", arg),), _ONE_Q),))


def sin(arg) -> Expr:
    # sin(-a) = -sin(a); the leading coefficient of the argument is kept positive
    arg = _coerce(arg)
    if not arg.terms:
        return ZERO
    sign = _ONE_Q
    if arg.terms[0][1] < 0:
        arg, sign = -arg, -sign
    return Expr((((("sin", arg),), sign),))


def cos(arg) -> Expr:
    arg = _coerce(arg)
    if not arg.terms:
        return ONE
    if arg.terms[0][1] < 0:
        arg = -arg
    return Expr((((("cos", arg),), _ONE_Q),))


_FUNCS = {"sin": sin, "cos": cos, "exp": exp}


def canonicalize(raw) -> Expr:
    """Canonical :class:`Expr` for a raw tree, a string, a number, or an Expr.

    Only ``x``, numbers, ``+ - * / ^``, sin, cos and exp are accepted;
    every exponent must reduce to a rational constant.
    """
    if isinstance(raw, Expr):
        return raw
    if isinstance(raw, str):
        raw = syntax.parse_expr(raw)
    if isinstance(raw, (int, Fraction)) and not isinstance(raw, bool):
        return Expr.const(raw)
    if isinstance(raw, syntax.Num):
        if not isinstance(raw.value, (int, Fraction)):
            raise ExprError(f"non-rational literal {raw.value!r}", raw.pos)
        return Expr.const(raw.value)
    if isinstance(raw, syntax.Sym):
        if raw.name == "x":
            return X
        raise ExprError(f"symbol {raw.name!r} is not allowed here", raw.pos)
    if isinstance(raw, syntax.Neg):
        return -canonicalize(raw.operand)
    if isinstance(raw, syntax.Call):
        fn = _FUNCS.get(raw.func)
        if fn is None:
            raise ExprError(f"{raw.func}() is not allowed here", raw.pos)
        return fn(canonicalize(raw.arg))
    if isinstance(raw, syntax.BinOp):
        left = canonicalize(raw.left)
        right = canonicalize(raw.right)
        try:
            if raw.op == "+":
                return left + right
            if raw.op == "-":
                return left - right
            if raw.op == "*":
                return left * right
            if raw.op == "/":
                return left / right
            if not right.is_constant:
                raise ExprError(f"non-rational exponent {right}", raw.pos)
            return left ** right.constant_value
        except ZeroDivisionError as exc:
            raise ExprError(str(exc), raw.pos) from None
        except ExprError as exc:
            if exc.pos is None:
                exc.pos = raw.pos
            raise
    raise ExprError(f"cannot canonicalize {raw!r}")


# -- calculus ---------------------------------------------------------------

def _factor_diff(f) -> Expr:
    kind = f[0]
    if kind == "x":
        return xpow(f[1] - 1) * f[1]
    arg = f[1]
    if kind == "exp":
        return exp(arg) * diff(arg)
    if kind == "sin":
        return cos(arg) * diff(arg)
    return -sin(arg) * diff(arg)


@functools.lru_cache(maxsize=1 << 14)
def diff(e: Expr) -> Expr:
    """Classical d/dx."""
    parts = []
    for mono, c in e.terms:
        for i, f in enumerate(mono):
            rest = Expr(((mono[:i] + mono[i + 1:], c),))
            parts.append(rest * _factor_diff(f))
    return Expr.sum(parts)


@functools.lru_cache(maxsize=1 << 14)
def conf_deriv(e: Expr, order: Scalar) -> Expr:
    """Conformable derivative ``x**(1-order) * de/dx`` for ``0 < order <= 1``."""
    order = as_rational(order, "derivative order")
    if not 0 < order <= 1:
        raise ExprError(f"conformable order {order} outside (0, 1]")
    return xpow(1 - order) * diff(e)


# -- numerics ---------------------------------------------------------------

def _eval_factor(f, x: float) -> float:
    kind = f[0]
    if kind == "x":
        return x ** float(f[1])
    v = eval_at(f[1], x)
    if kind == "exp":
        return math.exp(v)
    if kind == "sin":
        return math.sin(v)
    return math.cos(v)


def eval_at(e: Expr, x: float) -> float:
    """Floating value of ``e`` at ``x > 0``."""
    if not x > 0:
        raise DomainError(f"x = {x!r} is outside the conformable domain x > 0")
    total = []
    for mono, c in e.terms:
        v = float(c)
        for f in mono:
            v *= _eval_factor(f, x)
        total.append(v)
    return math.fsum(total)


class Equivalence(enum.Enum):
    """Outcome of :func:`equivalent`; truthy unless ``DIFFERENT``."""

    STRUCTURAL = "structural"
    CANCELLED = "cancelled"
    NUMERIC = "numeric-probable"
    DIFFERENT = "different"

    def __bool__(self):
        return self is not Equivalence.DIFFERENT

    @property
    def symbolic(self) -> bool:
        return self in (Equivalence.STRUCTURAL, Equivalence.CANCELLED)


_PROBE_RNG = random.Random(20170101)
PROBE_POINTS = tuple(_PROBE_RNG.uniform(0.1, 3.0) for _ in range(16))


def equivalent(a, b) -> Equivalence:
    """Compare two expressions, symbolically first and then by probing."""
    a, b = canonicalize(a), canonicalize(b)
    if a == b:
        return Equivalence.STRUCTURAL
    if (a - b).is_zero:
        return Equivalence.CANCELLED
    for x in PROBE_POINTS:
        try:
            va, vb = eval_at(a, x), eval_at(b, x)
        except (OverflowError, ValueError):
            return Equivalence.DIFFERENT
        if not abs(va - vb) <= 1e-10 * (1 + max(abs(va), abs(vb))):
            return Equivalence.DIFFERENT
    return Equivalence.NUMERIC


# -- printing ---------------------------------------------------------------

def _q_text(q: Fraction) -> str:
    if q.denominator == 1 and q > 0:
        return str(q)
    return f"({q})"


def _factor_text(f) -> str:
    if f[0] == "x":
        return "x" if f[1] == 1 else f"x^{_q_text(f[1])}"
    return f"{f[0]}({to_text(f[1])})"


def to_text(e: Expr) -> str:
    """Render ``e`` in the problem-file expression syntax."""
    if not e.terms:
        return "0"
    pieces = []
    for i, (mono, c) in enumerate(e.terms):
        # group repeated trig factors as powers
        grouped: list[tuple[str, int]] = []
        for f in mono:
            text = _factor_text(f)
            if grouped and grouped[-1][0] == text:
                grouped[-1] = (text, grouped[-1][1] + 1)
            else:
                grouped.append((text, 1))
        body = "*".join(t if n == 1 else f"{t}^{n}" for t, n in grouped)
        mag = abs(c)
        if not body:
            term = str(mag)
        elif mag == 1:
            term = body
        else:
            term = f"{mag}*{body}"
        if i == 0:
            pieces.append(f"-{term}" if c < 0 else term)
        else:
            pieces.append(f" - {term}" if c < 0 else f" + {term}")
    return "".join(pieces)
