"""Parser for the polynomial text syntax.

Grammar (whitespace is insignificant)::

    expr    := ["+"|"-"] term (("+"|"-") term)*
    term    := factor (("*"|"/") factor)*
    factor  := ["-"] power
    power   := atom ["^" integer]
    atom    := integer | identifier | "(" expr ")"

Division is only allowed by a nonzero constant, so ``-5/2`` and ``x/3`` parse
while ``1/x`` is rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable

from .errors import ParseError
from .polycore import Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str, source):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            offset = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            line, col = _locate(text, offset)
            raise ParseError(f"unexpected character {text[offset]!r}", line, col, source)
        kind = "num" if m.group(1) else "name" if m.group(2) else "op"
        value = m.group(m.lastindex)
        start = m.start(m.lastindex)
        if value == "**":
            line, col = _locate(text, start)
            raise ParseError("use '^' for exponents", line, col, source)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _locate(text: str, offset: int):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text, source=None):
        self.text = text
        self.source = source
        self.tokens = _tokenize(text, source)
        self.i = 0

    def error(self, message, token=None):
        token = token or self.tokens[self.i]
        line, col = _locate(self.text, token[2])
        raise ParseError(message, line, col, self.source)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.peek()
        if tok[1] != value or tok[0] != "op":
            self.error(f"expected {value!r}" + (f", found {tok[1]!r}" if tok[1] else ", found end of input"))
        return self.take()

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        sign = 1
        if self.peek()[:2] in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        value = self.term() * sign
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op_tok = self.take()
            rhs_tok = self.peek()
            rhs = self.factor()
            if op_tok[1] == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    self.error("division is only allowed by a nonzero constant", rhs_tok)
                value = value * (1 / rhs.constant_value())
        return value

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.factor()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                self.error("exponent must be a non-negative integer literal")
            self.take()
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return Polynomial.constant(Fraction(int(tok[1])))
        if tok[0] == "name":
            self.take()
            return Polynomial.var(tok[1])
        if tok[:2] == ("op", "("):
            self.take()
            value = self.expr()
            self.expect(")")
            return value
        if tok[0] == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok[1]!r}")


def parse_polynomial(text: str, variables: Iterable[str] = (), source=None) -> Polynomial:
    """Parse ``text``; ``variables`` seeds the variable table (print order)."""
    value = _Parser(text, source).parse()
    return value.with_variables(variables) if variables else value


def parse_rational(text, source=None) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    value = parse_polynomial(str(text), source=source)
    if not value.is_constant():
        raise ParseError(f"expected a rational number, got {text!r}", 1, 1, source)
    return value.constant_value()
