"""Small arithmetic expression grammar shared by field literals and chart files.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := signed (('*' | '/') signed)*
    signed := '-' signed | '+' signed | power
    power  := atom ('^' INT)?
    atom   := INT | INT '.' INT | 'sqrt' '(' expr ')' | VAR | '(' expr ')'

Field literals use the grammar with no variables; metric charts evaluate
it over coordinates ``x1..x4``, worldline expressions over ``x4``.
Decimal literals are exact (``0.25`` is 1/4).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .field import ExactReal, ExactRealSyntaxError, ER, sqrt as exact_sqrt

__all__ = [
    "Expr", "Num", "Ref", "BinOp", "Sqrt",
    "parse_expression", "evaluate_exact", "compile_float",
]


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True)
class Ref(Expr):
    name: str


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr


_TOKEN = re.compile(r"\s*(\d+\.\d+|\d+|[A-Za-z_][A-Za-z0-9_]*|\*|\+|-|/|\^|\(|\))")


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExactRealSyntaxError("bad character at %d in %r" % (pos, text))
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str], variables: Sequence[str]):
        self.tokens = tokens
        self.pos = 0
        self.variables = set(variables)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ExactRealSyntaxError("expected %r, found %r" % (expected, tok))
        self.pos += 1
        return tok

    def expr(self) -> Expr:
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.signed()
        while self.peek() in ("*", "/"):
            op = self.take()
            node = BinOp(op, node, self.signed())
        return node

    def signed(self) -> Expr:
        if self.peek() == "-":
            self.take()
            return BinOp("-", Num(Fraction(0)), self.signed())
        if self.peek() == "+":
            self.take()
            return self.signed()
        return self.power()

    def power(self) -> Expr:
        node = self.atom()
        if self.peek() == "^":
            self.take()
            exp = self.take()
            if not exp.isdigit():
                raise ExactRealSyntaxError("exponent must be a nonnegative integer")
            node = BinOp("^", node, Num(Fraction(int(exp))))
        return node

    def atom(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise ExactRealSyntaxError("unexpected end of expression")
        if tok == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if tok == "sqrt":
            self.take()
            self.take("(")
            node = self.expr()
            self.take(")")
            return Sqrt(node)
        if re.fullmatch(r"\d+\.\d+", tok):
            self.take()
            whole, frac = tok.split(".")
            return Num(Fraction(int(whole + frac), 10 ** len(frac)))
        if tok.isdigit():
            self.take()
            return Num(Fraction(int(tok)))
        if tok in self.variables:
            self.take()
            return Ref(tok)
        raise ExactRealSyntaxError("unknown name %r" % tok)


def parse_expression(text: str, variables: Sequence[str] = ()) -> Expr:
    parser = _Parser(_tokenize(text), variables)
    node = parser.expr()
    if parser.peek() is not None:
        raise ExactRealSyntaxError("trailing input at token %r" % parser.peek())
    return node


def evaluate_exact(expr: Expr, env: Mapping[str, ExactReal]) -> ExactReal:
    if isinstance(expr, Num):
        return ER(expr.value)
    if isinstance(expr, Ref):
        return env[expr.name]
    if isinstance(expr, Sqrt):
        return exact_sqrt(evaluate_exact(expr.arg, env))
    left = evaluate_exact(expr.left, env)
    right = evaluate_exact(expr.right, env)
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    if expr.op == "*":
        return left * right
    if expr.op == "/":
        return left / right
    if expr.op == "^":
        return left ** int(right.as_fraction())
    raise AssertionError(expr.op)


def compile_float(expr: Expr, variables: Sequence[str]):
    """Compile to a fast float-valued callable of the named variables."""

    def render(node: Expr) -> str:
        if isinstance(node, Num):
            return "(%r)" % float(node.value)
        if isinstance(node, Ref):
            return node.name
        if isinstance(node, Sqrt):
            return "_sqrt(%s)" % render(node.arg)
        if node.op == "^":
            return "(%s ** %d)" % (render(node.left), int(node.right.value))
        return "(%s %s %s)" % (render(node.left), node.op, render(node.right))

    from math import sqrt as _sqrt

    source = "lambda %s: %s" % (", ".join(variables), render(expr))
    return eval(source, {"_sqrt": _sqrt})  # AST is fully controlled above
