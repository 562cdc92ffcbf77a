"""Parser and printer for rational expressions in one variable.

Grammar (implicit multiplication binds like ``*``)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary | unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := NUMBER | "z" | "i" | "(" expr ")"

``NUMBER`` is a decimal integer or a finite decimal such as ``0.25``; both
are read exactly. ``3/4i`` therefore means ``(3/4)*i``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .gaussian import GaussianRational
from .poly import Polynomial, format_polynomial
from .rational import RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([zi])|([-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", m.group(1), start))
        elif m.group(2):
            out.append((m.group(2), m.group(2), start))
        else:
            out.append((m.group(3), m.group(3), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.k = 0

    @property
    def tok(self):
        return self.tokens[self.k]

    def take(self, kind=None):
        t = self.tok
        if kind is not None and t[0] != kind:
            found = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {kind!r}, found {found}", t[2])
        self.k += 1
        return t

    def parse(self) -> RationalFunction:
        value = self.expr()
        if self.tok[0] != "end":
            raise ParseError(f"unexpected {self.tok[1]!r}", self.tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.tok[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            kind = self.tok[0]
            if kind == "*":
                self.take()
                value = value * self.unary()
            elif kind == "/":
                pos = self.take()[2]
                rhs = self.unary()
                if rhs.is_zero():
                    raise ParseError("division by zero", pos)
                value = value / rhs
            elif kind in ("num", "z", "i", "("):
                value = value * self.unary()
            else:
                return value

    def unary(self):
        if self.tok[0] == "-":
            self.take()
            return -self.unary()
        if self.tok[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok[0] != "^":
            return base
        self.take()
        sign = 1
        if self.tok[0] == "-":
            self.take()
            sign = -1
        t = self.take("num")
        if "." in t[1]:
            raise ParseError("exponent must be an integer", t[2])
        k = sign * int(t[1])
        if k < 0 and base.is_zero():
            raise ParseError("division by zero", t[2])
        return base ** k

    def atom(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.take()
            return RationalFunction(Polynomial.constant(GaussianRational(Fraction(text))))
        if kind == "z":
            self.take()
            return RationalFunction(Polynomial.X)
        if kind == "i":
            self.take()
            return RationalFunction(Polynomial.constant(GaussianRational(0, 1)))
        if kind == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        found = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"expected operand, found {found}", pos)


def parse_rational(text: str) -> RationalFunction:
    """Parse ``text`` into a canonical ``RationalFunction``.

    Raises ``ParseError`` carrying the character offset of the problem.
    """
    return _Parser(text).parse()


def format_rational(f: RationalFunction, var: str = "z") -> str:
    """Parseable text for ``f``; ``parse_rational(format_rational(f)) == f``."""
    num = format_polynomial(f.num, var)
    if f.den.degree == 0:
        return num
    if " " in num or num.startswith("-"):
        num = f"({num})"
    den = format_polynomial(f.den, var)
    if den != var:
        den = f"({den})"
    return f"{num}/{den}"
