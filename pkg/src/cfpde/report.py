"""Grid evaluation of solved series and the comparison CSV."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Iterator

from .cadm import cadm_solve
from .crdtm import crdtm_solve
from .errors import DomainError
from .kernel import eval_at
from .problems import ProblemSpec, exact_eval
from .series import TSeries, series_eval

HEADER = ("x", "t", "cadm", "crdtm", "exact", "err_cadm", "err_crdtm", "bound")


@dataclass(frozen=True)
class GridSpec:
    x_start: float = 0.1
    x_end: float = 2.0
    x_count: int = 50
    t_start: float = 0.0
    t_end: float = 1.0
    t_count: int = 50

    def __post_init__(self):
        if not self.x_start > 0:
            raise ValueError("grid must start at x > 0")
        if self.t_start < 0:
            raise ValueError("grid must start at t >= 0")
        if self.x_count < 1 or self.t_count < 1:
            raise ValueError("grid counts must be at least 1")
        if self.x_end < self.x_start or self.t_end < self.t_start:
            raise ValueError("grid ranges must be increasing")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Read ``x=a:b:n,t=c:d:n``; either axis may be omitted."""
        fields = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            axis, _, spec = part.partition("=")
            pieces = spec.split(":")
            if axis.strip() not in ("x", "t") or len(pieces) != 3:
                raise ValueError(f"bad grid axis {part!r}; expected x=a:b:n or t=c:d:n")
            a = axis.strip()
            fields[f"{a}_start"] = float(pieces[0])
            fields[f"{a}_end"] = float(pieces[1])
            fields[f"{a}_count"] = int(pieces[2])
        return cls(**fields)

    @staticmethod
    def _axis(start: float, end: float, n: int) -> list[float]:
        if n == 1:
            return [start]
        step = (end - start) / (n - 1)
        return [start + i * step for i in range(n - 1)] + [end]

    @property
    def xs(self) -> list[float]:
        return self._axis(self.x_start, self.x_end, self.x_count)

    @property
    def ts(self) -> list[float]:
        return self._axis(self.t_start, self.t_end, self.t_count)

    def points(self) -> Iterator[tuple[float, float]]:
        """Row-major: t outer, x inner."""
        xs = self.xs
        for t in self.ts:
            for x in xs:
                yield x, t


@dataclass(frozen=True)
class Row:
    x: float
    t: float
    cadm: float | None = None
    crdtm: float | None = None
    exact: float | None = None
    err_cadm: float | None = None
    err_crdtm: float | None = None
    bound: float | None = None


@dataclass(frozen=True)
class ErrorReport:
    rows: tuple[Row, ...]

    def _max(self, attr: str) -> float | None:
        vals = [getattr(r, attr) for r in self.rows if getattr(r, attr) is not None]
        return max(vals) if vals else None

    @property
    def max_err_cadm(self) -> float | None:
        return self._max("err_cadm")

    @property
    def max_err_crdtm(self) -> float | None:
        return self._max("err_crdtm")

    def write_csv(self, stream: IO[str]) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(HEADER)
        for r in self.rows:
            writer.writerow([_fmt(getattr(r, name)) for name in HEADER])


def _fmt(v: float | None) -> str:
    return "" if v is None else format(v, ".17g")


def truncation_bound(s: TSeries, x: float, t: float) -> float:
    """``|c_m(x)| * t**(m alpha)`` for the last computed grade ``m``."""
    m = len(s.coeffs) - 1
    tail = abs(eval_at(s.coeffs[m], x))
    return tail * (t ** (m * float(s.alpha)) if m else 1.0)


def error_table(p: ProblemSpec, m: int, grid: GridSpec,
                cadm: TSeries | None = None, crdtm: TSeries | None = None,
                methods: tuple[str, ...] = ("cadm", "crdtm"),
                with_exact: bool = True) -> ErrorReport:
    """Evaluate the requested methods (and the exact solution) on ``grid``."""
    if "cadm" in methods and cadm is None:
        cadm = cadm_solve(p, m)
    if "crdtm" in methods and crdtm is None:
        crdtm = crdtm_solve(p, m)
    reference = with_exact and p.exact is not None
    last = cadm if cadm is not None else crdtm
    rows = []
    for x, t in grid.points():
        try:
            a = series_eval(cadm, x, t) if cadm is not None else None
            c = series_eval(crdtm, x, t) if crdtm is not None else None
            e = exact_eval(p, x, t) if reference else None
            bound = truncation_bound(last, x, t) if last is not None else None
        except (DomainError, ArithmeticError, ValueError) as exc:
            raise DomainError(f"at grid point (x={x!r}, t={t!r}): {exc}") from exc
        rows.append(Row(
            x, t, a, c, e,
            abs(a - e) if e is not None and a is not None else None,
            abs(c - e) if e is not None and c is not None else None,
            bound,
        ))
    return ErrorReport(tuple(rows))


def methods_agree(report: ErrorReport, rel_tol: float = 1e-12) -> list[Row]:
    """Rows where the two methods' values differ beyond ``rel_tol``."""
    return [
        r for r in report.rows
        if r.cadm is not None and r.crdtm is not None
        and not math.isclose(r.cadm, r.crdtm, rel_tol=rel_tol, abs_tol=0.0)
    ]
