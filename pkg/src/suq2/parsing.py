"""Expression grammar for algebra elements and operator expressions.

    expr   := term (("+"|"-") term)*
    term   := scalar? factor+  |  scalar          (juxtaposition = product)
    factor := atom ("^" nonneg-integer)?
    atom   := "a" | "a*" | "b" | "b*" | "F" | "P"
            | "d(" expr ")"    delta = [|D|, .]
            | "D(" expr ")"    [D, .]
            | "g(" expr ")"    nabla = [D^2, .]
            | "(" expr ")"
    scalar := decimal | rational "p/q" form

Pure algebra input yields an AlgebraElement; F, P, d(), D(), g() promote the
result to an operator expression tree.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import AlgebraElement
from .rep import OpCommD, OpDelta, OpF, OpNabla, OpP, OpProd, OpScaled, OpSum, from_algebra


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?|\.\d+)
  | (?P<name>[ab]\*?|[FP])
  | (?P<wrap>[dDg]\()
  | (?P<sym>[()^+\-/])
""", re.VERBOSE)


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if not m:
            raise ParseError(f"unknown token {source[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Value:
    """Either a pure algebra element or a promoted operator expression."""

    __slots__ = ("alg", "op")

    def __init__(self, alg=None, op=None):
        self.alg = alg
        self.op = op

    @property
    def is_alg(self):
        return self.op is None

    def to_op(self):
        return self.op if self.op is not None else from_algebra(self.alg)


def _mul(a: _Value, b: _Value) -> _Value:
    if a.is_alg and b.is_alg:
        return _Value(alg=a.alg * b.alg)
    return _Value(op=OpProd((a.to_op(), b.to_op())))


def _add(a: _Value, b: _Value, sign: int) -> _Value:
    if a.is_alg and b.is_alg:
        return _Value(alg=a.alg + b.alg.scale(sign))
    rhs = b.to_op()
    if sign < 0:
        rhs = OpScaled(Fraction(-1), rhs)
    return _Value(op=OpSum((a.to_op(), rhs)))


def _scale(a: _Value, c: Fraction) -> _Value:
    if a.is_alg:
        return _Value(alg=a.alg.scale(c))
    return _Value(op=OpScaled(c, a.to_op()))


def _power(a: _Value, n: int) -> _Value:
    if a.is_alg:
        return _Value(alg=a.alg ** n)
    if n == 0:
        return _Value(alg=AlgebraElement.one())
    return _Value(op=OpProd((a.to_op(),) * n))


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, val, off = self.peek()
        if val != text:
            raise ParseError(f"expected {text!r}, found {val!r}", off)
        return self.advance()

    def parse(self) -> _Value:
        value = self.parse_expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {val!r}", off)
        return value

    def parse_expr(self) -> _Value:
        if self.peek()[1] == "-":  # optional leading sign
            self.advance()
            value = _scale(self.parse_term(), Fraction(-1))
        else:
            value = self.parse_term()
        while self.peek()[1] in ("+", "-"):
            sign = 1 if self.advance()[1] == "+" else -1
            value = _add(value, self.parse_term(), sign)
        return value

    def parse_term(self) -> _Value:
        coeff = None
        if self.peek()[0] == "num":
            coeff = self._parse_scalar()
        factors = []
        while self._at_factor():
            factors.append(self.parse_factor())
        if not factors:
            if coeff is None:
                kind, val, off = self.peek()
                raise ParseError(f"expected a factor, found {val!r}", off)
            return _Value(alg=AlgebraElement.one().scale(coeff))
        value = factors[0]
        for f in factors[1:]:
            value = _mul(value, f)
        if coeff is not None:
            value = _scale(value, coeff)
        return value

    def _parse_scalar(self) -> Fraction:
        kind, val, off = self.advance()
        num = Fraction(val)
        if self.peek()[1] == "/":
            self.advance()
            kind2, val2, off2 = self.peek()
            if kind2 != "num" or "." in val2:
                raise ParseError("expected an integer denominator", off2)
            self.advance()
            num = num / Fraction(val2)
        return num

    def _at_factor(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("name", "wrap") or val == "("

    def parse_factor(self) -> _Value:
        value = self.parse_atom()
        if self.peek()[1] == "^":
            self.advance()
            kind, val, off = self.peek()
            if val == "-":
                raise ParseError("negative powers of generators are not in the algebra", off)
            if kind != "num" or "." in val:
                raise ParseError("expected a nonnegative integer exponent", off)
            self.advance()
            value = _power(value, int(val))
        return value

    def parse_atom(self) -> _Value:
        kind, val, off = self.peek()
        if kind == "name":
            self.advance()
            if val in ("a", "a*", "b", "b*"):
                return _Value(alg=AlgebraElement.gen(val))
            return _Value(op=OpF() if val == "F" else OpP())
        if kind == "wrap":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            node = {"d": OpDelta, "D": OpCommD, "g": OpNabla}[val[0]]
            return _Value(op=node(inner.to_op()))
        if val == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise ParseError(f"expected an atom, found {val!r}", off)


def parse(source: str):
    """Parse an expression; returns an AlgebraElement when the input uses
    only generators, otherwise an operator node."""
    value = _Parser(source).parse()
    return value.alg if value.is_alg else value.op
