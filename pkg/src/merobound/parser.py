"""Recursive-descent parser for polynomial expressions over Q(i).

Grammar (whitespace is ignored between tokens)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' factor) | ('/' nat))*
    factor := base ('^' nat)?
    base   := nat | 'i' | 'x' | 'y' | 'z' | '(' expr ')' | '-' factor

Implicit multiplication is rejected.  Division is only by a positive
integer literal, which is how rational coefficients are written.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith.gaussian import I, GaussianRational
from .arith.poly import SparsePoly
from .errors import ParseError

__all__ = [
    "Node",
    "Num",
    "Imag",
    "Var",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "parse_poly",
    "parse",
    "to_poly",
    "top_factors",
    "MAX_EXPONENT",
]

MAX_EXPONENT = 4096
VARIABLES = ("x", "y", "z")


@dataclass(frozen=True)
class Node:
    span: tuple  # (start, end) offsets into the source text


@dataclass(frozen=True)
class Num(Node):
    value: int


@dataclass(frozen=True)
class Imag(Node):
    pass


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Div(Node):
    left: Node
    divisor: int


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> Optional[str]:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def _error(self, message: str, offset: Optional[int] = None):
        raise ParseError(message, self.pos if offset is None else offset)

    def _nat(self) -> tuple:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self._error("expected a non-negative integer")
        return int(self.text[start:self.pos]), start

    def parse(self) -> Node:
        if self._peek() is None:
            self._error("empty expression")
        node = self.expr()
        if self._peek() is not None:
            ch = self.text[self.pos]
            if ch in VARIABLES or ch.isdigit() or ch in "(i":
                self._error("implicit multiplication is not allowed; use '*'")
            self._error(f"unexpected {ch!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while (op := self._peek()) in ("+", "-"):
            self.pos += 1
            right = self.term()
            span = (node.span[0], right.span[1])
            node = Add(span, node, right) if op == "+" else Sub(span, node, right)
        return node

    def term(self) -> Node:
        node = self.factor()
        while (op := self._peek()) in ("*", "/"):
            self.pos += 1
            if op == "*":
                right = self.factor()
                node = Mul((node.span[0], right.span[1]), node, right)
            else:
                if self._peek() is None or not self.text[self.pos].isdigit():
                    self._error("division is only allowed by an integer literal")
                value, start = self._nat()
                if value == 0:
                    self._error("division by zero", start)
                node = Div((node.span[0], self.pos), node, value)
        return node

    def factor(self) -> Node:
        node = self.base()
        if self._peek() == "^":
            self.pos += 1
            if self._peek() is None or not self.text[self.pos].isdigit():
                self._error("exponent must be a non-negative integer literal")
            value, start = self._nat()
            if value > MAX_EXPONENT:
                self._error(f"exponent {value} exceeds the limit {MAX_EXPONENT}", start)
            node = Pow((node.span[0], self.pos), node, value)
        return node

    def base(self) -> Node:
        ch = self._peek()
        start = self.pos
        if ch is None:
            self._error("unexpected end of input")
        if ch.isdigit():
            value, _ = self._nat()
            return Num((start, self.pos), value)
        if ch == "i":
            self.pos += 1
            return Imag((start, self.pos))
        if ch in VARIABLES:
            self.pos += 1
            return Var((start, self.pos), ch)
        if ch == "-":
            self.pos += 1
            inner = self.factor()
            return Neg((start, inner.span[1]), inner)
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self._peek() != ")":
                self._error("expected ')'")
            self.pos += 1
            return _respan(inner, (start, self.pos))
        self._error(f"unexpected {ch!r}")


def _respan(node: Node, span: tuple) -> Node:
    """Parenthesised nodes keep their structure but cover the parentheses."""
    fields = {k: v for k, v in node.__dict__.items() if k != "span"}
    return type(node)(span, **fields)


def parse_poly(text: str) -> Node:
    return _Parser(text).parse()


def variables_of(node: Node) -> set:
    if isinstance(node, Var):
        return {node.name}
    out = set()
    for child in _children(node):
        out |= variables_of(child)
    return out


def _children(node: Node):
    if isinstance(node, (Add, Sub, Mul)):
        return (node.left, node.right)
    if isinstance(node, Neg):
        return (node.operand,)
    if isinstance(node, Div):
        return (node.left,)
    if isinstance(node, Pow):
        return (node.base,)
    return ()


def _vars_for(node: Node, vars: Optional[tuple]) -> tuple:
    if vars is not None:
        return tuple(vars)
    return ("x", "y", "z") if "z" in variables_of(node) else ("x", "y")


def to_poly(node: Node, vars: Optional[tuple] = None) -> SparsePoly:
    """Expand an AST into a SparsePoly (over x, y, plus z when it occurs)."""
    vars = _vars_for(node, vars)
    return _eval(node, vars)


def _eval(node: Node, vars: tuple) -> SparsePoly:
    if isinstance(node, Num):
        return SparsePoly.const(node.value, vars)
    if isinstance(node, Imag):
        return SparsePoly.const(I, vars)
    if isinstance(node, Var):
        if node.name not in vars:
            raise ParseError(f"variable {node.name} not allowed here", node.span[0])
        return SparsePoly.var(node.name, vars)
    if isinstance(node, Neg):
        return -_eval(node.operand, vars)
    if isinstance(node, Add):
        return _eval(node.left, vars) + _eval(node.right, vars)
    if isinstance(node, Sub):
        return _eval(node.left, vars) - _eval(node.right, vars)
    if isinstance(node, Mul):
        return _eval(node.left, vars) * _eval(node.right, vars)
    if isinstance(node, Div):
        return _eval(node.left, vars) * GaussianRational(Fraction(1, node.divisor))
    if isinstance(node, Pow):
        return _eval(node.base, vars) ** node.exponent
    raise TypeError(f"unknown node {node!r}")


def parse(text: str, vars: Optional[tuple] = None) -> SparsePoly:
    return to_poly(parse_poly(text), vars)


def top_factors(node: Node, vars: Optional[tuple] = None) -> list:
    """Non-constant factors of a top-level product, powers repeated.

    ``(y+x)^2*(y-x)`` gives ``[y+x, y+x, y-x]``; a source that is not a
    product gives a single factor.
    """
    vars = _vars_for(node, vars)
    out = []

    def walk(n):
        if isinstance(n, Mul):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Pow):
            for _ in range(n.exponent):
                walk(n.base)
        elif isinstance(n, (Neg, Div)):
            walk(n.operand if isinstance(n, Neg) else n.left)
        else:
            p = _eval(n, vars)
            if not p.is_constant():
                out.append(p)

    walk(node)
    return out


def is_factored(node: Node) -> bool:
    """True when the source spells g as an explicit product of several factors."""
    return len(top_factors(node)) > 1
