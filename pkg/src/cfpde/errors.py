"""Exception hierarchy shared by every cfpde module."""

from __future__ import annotations


class CfpdeError(Exception):
    """Base class for all toolkit errors."""


class ExprError(CfpdeError, ValueError):
    """An expression falls outside the supported class.

    ``pos`` is the 0-based offset into the source text when the offending
    node came from the parser, else ``None``.
    """

    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message)
        self.pos = pos


class DomainError(CfpdeError, ValueError):
    """Numeric evaluation outside the conformable domain (x <= 0, t < 0)."""


class SeriesError(CfpdeError, ValueError):
    """Incompatible graded series (mismatched alpha, bad grade placement)."""


class OperatorError(CfpdeError, ValueError):
    """An operator tree was used where its shape is not allowed."""


class ParseError(CfpdeError):
    """Problem-file or expression syntax/validation failure with a locus."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(str(self))

    def __str__(self) -> str:
        locus = [str(p) for p in (self.source, self.line, self.column) if p is not None]
        if locus:
            return f"{':'.join(locus)}: {self.message}"
        return self.message


class NoReferenceError(CfpdeError, LookupError):
    """The problem carries no exact solution to compare against."""
