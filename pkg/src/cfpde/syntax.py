"""Raw expression trees and a recursive-descent parser for them.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-x^2``
is ``-(x^2)``.  Purely numeric sub-trees are folded to a single :class:`Num`
while parsing; this makes :func:`to_text` and :func:`parse_expr` exact
inverses on parsed trees.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .errors import ParseError

FUNCTIONS = frozenset({"sin", "cos", "exp", "Da", "Db", "Db2"})


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: int = field(default=-1, compare=False, repr=False)


@dataclass(frozen=True)
class Sym:
    name: str
    pos: int = field(default=-1, compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: int = field(default=-1, compare=False, repr=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int = field(default=-1, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"
    pos: int = field(default=-1, compare=False, repr=False)


Node = Union[Num, Sym, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while True:
        while i < len(text) and text[i].isspace():
            i += 1
        if i >= len(text):
            break
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", column=i + 1)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        i = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _fold(op: str, left: Node, right: Node, pos: int) -> Node:
    if isinstance(left, Num) and isinstance(right, Num):
        a, b = left.value, right.value
        if op == "+":
            return Num(a + b, pos)
        if op == "-":
            return Num(a - b, pos)
        if op == "*":
            return Num(a * b, pos)
        if op == "/":
            if b == 0:
                raise ParseError("division by zero", column=pos + 1)
            return Num(a / b, pos)
        if op == "^" and b.denominator == 1 and not (a == 0 and b < 0):
            return Num(a ** int(b), pos)
    return BinOp(op, left, right, pos)


def _negate(operand: Node, pos: int) -> Node:
    if isinstance(operand, Num):
        return Num(-operand.value, pos)
    return Neg(operand, pos)


class _Parser:
    def __init__(self, text: str, params: Mapping[str, Fraction]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.params = params

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        kind, value, pos = self.take()
        if value != text or kind != "op":
            found = "end of input" if kind == "end" else repr(value)
            raise ParseError(f"expected {text!r}, found {found}", column=pos + 1)

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, pos = self.take()
            node = _fold(op, node, self.term(), pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            node = _fold(op, node, self.unary(), pos)
        return node

    def unary(self) -> Node:
        kind, value, pos = self.peek()
        if kind == "op" and value in ("-", "+"):
            self.take()
            operand = self.unary()
            return _negate(operand, pos) if value == "-" else operand
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.take()
            return _fold("^", base, self.unary(), pos)
        return base

    def atom(self) -> Node:
        kind, value, pos = self.take()
        if kind == "num":
            return Num(Fraction(value), pos)
        if kind == "name":
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg, pos)
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                raise ParseError(f"unknown function {value!r}", column=pos + 1)
            if value in self.params:
                return Num(Fraction(self.params[value]), pos)
            return Sym(value, pos)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {found}", column=pos + 1)


def parse_expr(text: str, params: Mapping[str, Fraction] | None = None) -> Node:
    """Parse ``text`` into a raw tree, substituting ``params`` for names.

    Columns in raised :class:`ParseError` are 1-based offsets into ``text``.
    """
    parser = _Parser(text, params or {})
    node = parser.expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected {value!r}", column=pos + 1)
    return node


def symbols(node: Node) -> set[str]:
    """Names of all free symbols in ``node``."""
    if isinstance(node, Sym):
        return {node.name}
    if isinstance(node, Neg):
        return symbols(node.operand)
    if isinstance(node, BinOp):
        return symbols(node.left) | symbols(node.right)
    if isinstance(node, Call):
        return symbols(node.arg)
    return set()


def _num_text(v: Fraction) -> str:
    if v.denominator == 1 and v >= 0:
        return str(v.numerator)
    return f"({v})"


def to_text(node: Node) -> str:
    """Render ``node`` so that ``parse_expr(to_text(n)) == n``."""
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        if isinstance(node.operand, Neg) or (
            isinstance(node.operand, BinOp) and node.operand.op != "^"
        ):
            inner = f"({inner})"
        return f"-{inner}"
    prec = _PREC[node.op]
    left, right = to_text(node.left), to_text(node.right)
    if isinstance(node.left, Neg) or (
        isinstance(node.left, BinOp)
        and (_PREC[node.left.op] < prec or (node.op == "^" and node.left.op == "^"))
    ):
        left = f"({left})"
    if isinstance(node.right, Neg) or (
        isinstance(node.right, BinOp)
        and (_PREC[node.right.op] < prec or (_PREC[node.right.op] == prec and node.op != "^"))
    ):
        right = f"({right})"
    if node.op == "^":
        return f"{left}^{right}"
    return f"{left} {node.op} {right}"
