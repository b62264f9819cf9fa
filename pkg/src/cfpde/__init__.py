"""Series solvers for time-fractional PDEs with conformable derivatives.

Two methods produce the same graded series in ``t**alpha``: the
conformable Adomian decomposition (:mod:`cfpde.cadm`) and the conformable
reduced differential transform (:mod:`cfpde.crdtm`).  All coefficients are
exact expressions in ``x`` (:mod:`cfpde.kernel`).
"""

from .cadm import adomian_polynomials, cadm_iterates, cadm_solve, formal_parts
from .checks import compare_coefficients, residual, residual_order
from .crdtm import crdtm_solve
from .errors import (
    CfpdeError, DomainError, ExprError, NoReferenceError, OperatorError, ParseError,
    SeriesError,
)
from .kernel import Equivalence, Expr, canonicalize, conf_deriv, diff, equivalent, eval_at
from .problems import BUILTINS, ProblemSpec, builtin, format_problem, load_problem, parse_problem
from .report import ErrorReport, GridSpec, error_table
from .series import TSeries, cauchy_product, inv_L_series, series_eval, time_derivative

__all__ = [
    "BUILTINS", "CfpdeError", "DomainError", "Equivalence", "ErrorReport", "Expr",
    "ExprError", "GridSpec", "NoReferenceError", "OperatorError", "ParseError",
    "ProblemSpec", "SeriesError", "TSeries", "adomian_polynomials", "builtin",
    "cadm_iterates", "cadm_solve", "canonicalize", "cauchy_product",
    "compare_coefficients", "conf_deriv", "crdtm_solve", "diff", "equivalent",
    "error_table", "eval_at", "format_problem", "formal_parts", "inv_L_series",
    "load_problem", "parse_problem", "residual", "residual_order", "series_eval",
    "time_derivative",
]
