"""Machine-checkable correctness properties of a computed series."""

from __future__ import annotations

from .kernel import Expr, equivalent
from .operators import spectrum_coeff
from .series import TSeries, time_derivative


def residual(p, s: TSeries) -> list[Expr]:
    """Grade-wise residual of ``L u + R u + N u - g`` for grades ``0..m-1``.

    Grade ``m`` is left out: it depends on the unknown grade ``m + 1``.
    """
    spectra = list(s.coeffs)
    lu = time_derivative(s)
    out = []
    for k in range(len(spectra) - 1):
        r = lu.coeff(k) + spectrum_coeff(p.R, spectra, k) - p.g.coeff(k)
        if p.N is not None:
            r = r + spectrum_coeff(p.N, spectra, k)
        out.append(r)
    return out


def residual_order(p, s: TSeries) -> int:
    """Lowest grade with a non-vanishing residual, or ``m`` if none."""
    for k, r in enumerate(residual(p, s)):
        if not r.is_zero:
            return k
    return len(s.coeffs) - 1


def compare_coefficients(a: TSeries, b: TSeries) -> list:
    """Per-grade :class:`~cfpde.kernel.Equivalence` of two series."""
    n = max(len(a.coeffs), len(b.coeffs))
    return [equivalent(a.coeff(k), b.coeff(k)) for k in range(n)]
