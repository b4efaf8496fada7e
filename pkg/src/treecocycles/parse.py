"""Recursive-descent parser for rational functions in t.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('+' | '-') unary | power
    power := atom ('^' ['-'] INT)?
    atom  := INT | 't' | '(' expr ')'

Integers are mapped into the base field, so ``1/2`` is a fraction over Q and
a residue over F_p.
"""

from __future__ import annotations

from .algebra import Polynomial, RationalFunction
from .fields import QQ


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}: {text!r}")


class _Parser:
    def __init__(self, text: str, field):
        self.text = text
        self.field = field
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def fail(self, message: str):
        raise ParseError(message, self.text, self.pos)

    def integer(self) -> int:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected integer")
        return int(self.text[start:self.pos])

    def expr(self) -> RationalFunction:
        value = self.term()
        while True:
            if self.take("+"):
                value = value + self.term()
            elif self.take("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> RationalFunction:
        value = self.unary()
        while True:
            if self.take("*"):
                value = value * self.unary()
            elif self.take("/"):
                pos = self.pos
                rhs = self.unary()
                if rhs.is_zero():
                    raise ParseError("division by zero", self.text, pos)
                value = value / rhs
            else:
                return value

    def unary(self) -> RationalFunction:
        if self.take("-"):
            return -self.unary()
        if self.take("+"):
            return self.unary()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        if self.take("^"):
            neg = self.take("-")
            k = self.integer()
            if neg:
                if base.is_zero():
                    self.fail("zero to a negative power")
                k = -k
            return base**k
        return base

    def atom(self) -> RationalFunction:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if not self.take(")"):
                self.fail("expected ')'")
            return value
        if ch == "t":
            self.pos += 1
            return RationalFunction.t(self.field)
        if ch.isdigit():
            return RationalFunction(Polynomial([self.integer()], self.field))
        if ch == "":
            self.fail("unexpected end of input")
        self.fail(f"unexpected character {ch!r}")


def parse_rational(text: str, field=QQ) -> RationalFunction:
    """Parse ``text`` into a reduced rational function over ``field``."""
    parser = _Parser(text, field)
    value = parser.expr()
    if parser.peek():
        parser.fail("trailing input")
    return value
