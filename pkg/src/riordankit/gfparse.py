"""Closed-form generating functions such as ``"x/(1-x)"`` evaluated as truncated series.

Grammar (whitespace is ignored, implicit multiplication is rejected)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' ['-'] int)?
    atom   := number | 'x' | '-' atom | '(' expr ')'

Numbers are non-negative integers or decimals; ``1/2`` is a quotient, which
evaluates to the same series.  Because negation binds inside ``atom``,
``-x^2`` reads as ``(-x)^2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError
from .fps import Series

MAX_EXPONENT = 64
# how far past the requested order we look for a denominator's first nonzero term
MAX_VALUATION_SEARCH = 256


class ParseError(DomainError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


class EvalError(DomainError):
    pass


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class X:
    pass


@dataclass(frozen=True)
class Neg:
    operand: GfExpr


@dataclass(frozen=True)
class Add:
    left: GfExpr
    right: GfExpr


@dataclass(frozen=True)
class Sub:
    left: GfExpr
    right: GfExpr


@dataclass(frozen=True)
class Mul:
    left: GfExpr
    right: GfExpr


@dataclass(frozen=True)
class Div:
    left: GfExpr
    right: GfExpr


@dataclass(frozen=True)
class Pow:
    base: GfExpr
    exponent: int


GfExpr = Union[Num, X, Neg, Add, Sub, Mul, Div, Pow]

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?|\.\d+)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), m.start(1)))
        else:
            ch = m.group(2)
            if ch in "+-*/^()x":
                tokens.append((ch, ch, m.start(2)))
            elif ch.isspace():
                pass
            else:
                raise ParseError(f"unexpected character {ch!r}", m.start(2))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][2]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> GfExpr:
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take(self.peek())[0]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> GfExpr:
        node = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take(self.peek())[0]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> GfExpr:
        node = self.atom()
        if self.peek() == "^":
            self.take("^")
            sign = 1
            if self.peek() == "-":
                self.take("-")
                sign = -1
            start = self.pos()
            _, text, _ = self.take("num")
            if "." in text:
                raise ParseError("exponent must be an integer", start)
            k = sign * int(text)
            if abs(k) > MAX_EXPONENT:
                raise ParseError(f"exponent {k} exceeds the limit {MAX_EXPONENT}", start)
            node = Pow(node, k)
        return node

    def atom(self) -> GfExpr:
        kind = self.peek()
        if kind == "num":
            return Num(Fraction(self.take("num")[1]))
        if kind == "x":
            self.take("x")
            return X()
        if kind == "-":
            self.take("-")
            return Neg(self.atom())
        if kind == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        tok = self.tokens[self.i]
        what = "end of input" if kind == "end" else repr(tok[1])
        raise ParseError(f"expected a number, 'x', '-' or '(', found {what}", tok[2])


def parse(text: str) -> GfExpr:
    if not text.strip():
        raise ParseError("empty expression", 0)
    p = _Parser(text)
    node = p.expr()
    if p.peek() != "end":
        tok = p.tokens[p.i]
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return node


def render(e: GfExpr) -> str:
    """Canonical, fully parenthesised text that :func:`parse` reads back."""
    if isinstance(e, Num):
        v = e.value
        if v.denominator == 1 and v >= 0:
            return str(v.numerator)
        body = f"{abs(v.numerator)}/{v.denominator}" if v.denominator != 1 else str(abs(v))
        return f"(-({body}))" if v < 0 else f"({body})"
    if isinstance(e, X):
        return "x"
    if isinstance(e, Neg):
        return f"-({render(e.operand)})"
    if isinstance(e, Pow):
        return f"({render(e.base)})^{e.exponent}"
    sym = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
    return f"({render(e.left)}{sym}{render(e.right)})"


def evaluate(e: GfExpr, n: int) -> Series:
    """Expand ``e`` as a series truncated at order ``n``.

    Quotients whose denominator has positive valuation ``v`` are accepted
    when the numerator vanishes to the same order; both sides are then
    evaluated ``v`` orders deeper and divided by ``x^v``.
    """
    if n < 0:
        raise EvalError("truncation order must be non-negative")
    if isinstance(e, Num):
        return Series.constant(e.value, n)
    if isinstance(e, X):
        return Series.x(n)
    if isinstance(e, Neg):
        return -evaluate(e.operand, n)
    if isinstance(e, Add):
        return evaluate(e.left, n) + evaluate(e.right, n)
    if isinstance(e, Sub):
        return evaluate(e.left, n) - evaluate(e.right, n)
    if isinstance(e, Mul):
        return evaluate(e.left, n) * evaluate(e.right, n)
    if isinstance(e, Div):
        return _divide(e, n)
    if isinstance(e, Pow):
        if abs(e.exponent) > MAX_EXPONENT:
            raise EvalError(f"exponent {e.exponent} exceeds the limit {MAX_EXPONENT}")
        base = evaluate(e.base, n)
        if e.exponent < 0 and not base.is_unit():
            raise EvalError("negative power of a series without constant term")
        return base**e.exponent
    raise TypeError(f"not a generating-function expression: {e!r}")


def _divide(e: Div, n: int) -> Series:
    den = evaluate(e.right, n)
    v = den.valuation()
    if v == 0:
        return evaluate(e.left, n) / den
    depth = n
    while v is None:
        depth = 2 * depth + 1
        if depth > n + MAX_VALUATION_SEARCH:
            raise EvalError("division by a series that vanishes identically")
        v = evaluate(e.right, depth).valuation()
    den = evaluate(e.right, n + v)
    num = evaluate(e.left, n + v)
    nv = num.valuation()
    if nv is not None and nv < v:
        raise EvalError(
            f"quotient has a pole: numerator valuation {nv} < denominator valuation {v}"
        )
    return num.shift_down(v) / den.shift_down(v)


def eval_text(text: str, n: int) -> Series:
    return evaluate(parse(text), n)
