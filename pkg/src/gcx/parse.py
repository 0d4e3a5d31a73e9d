"""Recursive-descent parser for polynomial strings.

Grammar (whitespace is insignificant, multiplication is always explicit)::

    poly        := ['+' | '-'] term (('+' | '-') term)*
    term        := factor ('*' factor)*
    factor      := coefficient | variable ['^' natural] | '(' poly ')' ['^' natural]
    coefficient := integer ['/' positive-integer]

The Unicode minus sign is accepted as '-'.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .poly import PolyRing, Polynomial

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/^()−]))"
)


def _tokenize(src: str):
    pos = 0
    toks = []
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", 1, pos + 1, src)
        kind = m.lastgroup
        text = m.group(kind)
        if text == "−":
            text = "-"
        toks.append((kind, text, m.start(kind) + 1))
        pos = m.end()
    toks.append(("end", "", n + 1))
    return toks


class _Parser:
    def __init__(self, src: str, ring: PolyRing):
        self.src = src
        self.ring = ring
        self.toks = _tokenize(src)
        self.i = 0
        self.index = {name: k for k, name in enumerate(ring.names)}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, col=None):
        if col is None:
            col = self.peek()[2]
        raise ParseError(msg, 1, col, self.src)

    def expect(self, text):
        kind, t, col = self.take()
        if t != text:
            self.error(f"expected {text!r}, found {t or 'end of input'!r}", col)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        f = self.poly()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def poly(self) -> Polynomial:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            acc = acc * self.factor()
        return acc

    def natural(self) -> int:
        kind, text, col = self.take()
        if kind != "num":
            self.error("expected a natural exponent", col)
        return int(text)

    def factor(self) -> Polynomial:
        kind, text, col = self.take()
        if kind == "num":
            value = Fraction(int(text))
            if self.peek()[1] == "/":
                self.take()
                dk, dt, dcol = self.take()
                if dk != "num" or int(dt) == 0:
                    self.error("expected a positive integer denominator", dcol)
                if self.ring.field.p and int(dt) % self.ring.field.p == 0:
                    self.error(f"denominator {dt} vanishes in GF({self.ring.field.p})", dcol)
                value = Fraction(int(text), int(dt))
            return self.ring.const(value)
        if kind == "name":
            if text not in self.index:
                self.error(f"unknown variable {text!r}", col)
            v = self.ring.var(self.index[text])
            if self.peek()[1] == "^":
                self.take()
                return v ** self.natural()
            return v
        if text == "(":
            inner = self.poly()
            self.expect(")")
            if self.peek()[1] == "^":
                self.take()
                return inner ** self.natural()
            return inner
        self.error(f"unexpected {text or 'end of input'!r}", col)


def parse_polynomial(src: str, ring: PolyRing) -> Polynomial:
    """Parse ``src`` into a canonical polynomial of ``ring``."""
    if not isinstance(src, str):
        if isinstance(src, int):
            return ring.const(src)
        raise ParseError(f"expected a string, got {type(src).__name__}")
    return _Parser(src, ring).parse()
