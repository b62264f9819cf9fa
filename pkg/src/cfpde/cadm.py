"""Conformable Adomian decomposition.

With ``L`` the conformable time derivative of order ``alpha`` and
``L^-1 f = int_0^t xi**(alpha-1) f dxi``, the iterates are ::

    u_0     = u(x, 0) + L^-1 g
    u_{n+1} = -L^-1 (R u_n) - L^-1 A_n

where ``A_n`` is the ``lam**n`` coefficient of ``N(sum_i lam**i u_i)``.
The polynomials are read off a truncated lambda-ring product rather than
by n-fold differentiation in ``lam``; the coefficients are the same.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .kernel import ONE, ZERO, Expr, conf_deriv
from .kernel import to_text as expr_text
from .operators import OperatorExpr, apply_linear, eval_lambda, lift_constant, space_deriv
from .series import TSeries, inv_L_series

DEFAULT_ORDER = 7


def adomian_polynomials(n_op: OperatorExpr | None, parts: Sequence) -> list:
    """``[A_0, ..., A_m]`` for the nonlinearity ``n_op`` and parts ``u_0..u_m``."""
    parts = list(parts)
    if n_op is None:
        return [parts[0] * 0 for _ in parts]
    return list(eval_lambda(n_op, parts).coeffs)


def cadm_iterates(p, m: int = DEFAULT_ORDER) -> list[TSeries]:
    """The decomposition terms ``u_0..u_m`` as graded series truncated at grade ``m``.

    With no source term every ``u_n`` lives at grade ``n`` only; that
    alignment is asserted on each iteration.
    """
    if m < 0:
        raise ValueError("truncation order must be non-negative")
    alpha = p.alpha
    theta = TSeries(alpha, (p.ic,)).truncate(m)
    terms = [(theta + inv_L_series(p.g)).truncate(m)]
    sourceless = p.g.is_zero
    for n in range(m):
        un = terms[n]
        if sourceless:
            assert all(c.is_zero for k, c in enumerate(un.coeffs) if k != n), (
                f"u_{n} leaked outside grade {n}"
            )
        r_un = un.map(lambda c: apply_linear(p.R, c))
        a_n = adomian_polynomials(p.N, terms)[n]
        terms.append((-inv_L_series(r_un + a_n)).truncate(m))
    return terms


def cadm_solve(p, m: int = DEFAULT_ORDER) -> TSeries:
    """Order-``m`` CADM approximation ``sum_{n<=m} u_n`` as a graded series."""
    terms = cadm_iterates(p, m)
    total = terms[0]
    for u in terms[1:]:
        total = total + u
    return total


# -- formal parts ---------------------------------------------------------------
# A FormalPoly is a polynomial in the symbols u_i and their conformable
# x-derivatives, with Expr coefficients.  Feeding symbols u_0..u_m through
# eval_lambda prints A_n as formulas in the parts.

Atom = tuple  # (index, (order applied first, order applied next, ...))


def _atom_key(atom: Atom):
    # underived parts first, then by derivative chain, then by index
    return (atom[1], atom[0])


@dataclass(frozen=True)
class FormalPoly:
    terms: tuple  # ((sorted atom tuple, Expr coefficient), ...)

    @classmethod
    def part(cls, i: int) -> "FormalPoly":
        return cls(((((i, ()),), ONE),))

    @classmethod
    def constant(cls, e: Expr) -> "FormalPoly":
        return cls(((((), e),)) if not e.is_zero else ())

    @staticmethod
    def _collect(acc: dict) -> "FormalPoly":
        return FormalPoly(tuple(sorted(
            ((m, c) for m, c in acc.items() if not c.is_zero),
            key=lambda mc: (len(mc[0]), tuple(_atom_key(a) for a in mc[0])),
        )))

    def __add__(self, other: "FormalPoly") -> "FormalPoly":
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, ZERO) + c
        return self._collect(acc)

    def __neg__(self):
        return FormalPoly(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "FormalPoly":
        if not isinstance(other, FormalPoly):
            return self._collect({m: c * other for m, c in self.terms})
        acc: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(sorted(m1 + m2, key=_atom_key))
                acc[m] = acc.get(m, ZERO) + c1 * c2
        return self._collect(acc)

    __rmul__ = __mul__

    def derive(self, order: Fraction) -> "FormalPoly":
        """Leibniz rule; the derivative of atom ``(i, ds)`` is ``(i, ds + (order,))``."""
        acc: dict = {}
        for mono, c in self.terms:
            dc = conf_deriv(c, order)
            if not dc.is_zero:
                acc[mono] = acc.get(mono, ZERO) + dc
            for j, (i, ds) in enumerate(mono):
                m = tuple(sorted(mono[:j] + ((i, ds + (order,)),) + mono[j + 1:], key=_atom_key))
                acc[m] = acc.get(m, ZERO) + c
        return self._collect(acc)

    def to_text(self, names: Mapping[Fraction, str] | None = None) -> str:
        return _formal_text(self, names or {})

    def __str__(self):
        return self.to_text()


@space_deriv.register
def _(value: FormalPoly, order):
    return value.derive(order)


@lift_constant.register
def _(like: FormalPoly, e):
    return FormalPoly.constant(e)


def formal_parts(m: int) -> list[FormalPoly]:
    """Symbols ``u_0..u_m`` for symbolic Adomian polynomials."""
    return [FormalPoly.part(i) for i in range(m + 1)]


def _atom_text(atom: Atom, names: Mapping[Fraction, str]) -> str:
    i, ds = atom
    text = f"u{i}"
    k = 0
    while k < len(ds):
        name = names.get(ds[k], f"T[{ds[k]}]")
        if name == "Db" and k + 1 < len(ds) and ds[k + 1] == ds[k]:
            text, k = f"Db2({text})", k + 2
        else:
            text, k = f"{name}({text})", k + 1
    return text


def _formal_text(poly: FormalPoly, names) -> str:
    if not poly.terms:
        return "0"
    out = []
    for idx, (mono, c) in enumerate(poly.terms):
        grouped: list[list] = []
        for atom in mono:
            text = _atom_text(atom, names)
            if grouped and grouped[-1][0] == text:
                grouped[-1][1] += 1
            else:
                grouped.append([text, 1])
        body = "*".join(t if n == 1 else f"{t}^{n}" for t, n in grouped)
        neg = False
        if c.is_constant:
            q = c.constant_value
            neg = q < 0
            q = abs(q)
            lead = "" if q == 1 and body else str(q)
        else:
            lead = f"({expr_text(c)})"
        term = "*".join(p for p in (lead, body) if p)
        if idx == 0:
            out.append(f"-{term}" if neg else term)
        else:
            out.append(f" - {term}" if neg else f" + {term}")
    return "".join(out)
