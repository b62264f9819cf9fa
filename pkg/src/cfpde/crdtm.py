"""Conformable reduced differential transform.

The time derivative of order ``alpha`` maps spectrum ``U_{k+1}`` to
``alpha*(k+1)*U_{k+1}``, so ``L u + R u + N u = g`` becomes ::

    U_{k+1} = (G_k - [R u]_k - [N u]_k) / (alpha*(k+1)),   U_0 = u(x, 0)

with ``[.]_k`` the grade-k transform from :func:`~cfpde.operators.spectrum_coeff`.
"""

from __future__ import annotations

from .kernel import Expr
from .operators import spectrum_coeff
from .series import TSeries

DEFAULT_ORDER = 7


def transform_ic(p) -> Expr:
    """``U_0`` for a problem first order in time: the initial condition itself.

    Problems of higher order in time cannot be expressed in the problem
    model, so no further initial spectra exist.
    """
    return p.ic


def crdtm_solve(p, m: int = DEFAULT_ORDER) -> TSeries:
    if m < 0:
        raise ValueError("truncation order must be non-negative")
    alpha = p.alpha
    spectra = [transform_ic(p)]
    for k in range(m):
        rhs = p.g.coeff(k) - spectrum_coeff(p.R, spectra, k)
        if p.N is not None:
            rhs = rhs - spectrum_coeff(p.N, spectra, k)
        spectra.append(rhs / (alpha * (k + 1)))
    return TSeries(alpha, tuple(spectra))
