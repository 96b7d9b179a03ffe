"""Recursive-descent parser for the small expression grammar used on the CLI.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

The parser builds nothing itself; it folds the expression through a ring
object supplied by the caller, so the same code serves polynomials over a
prime field (field moduli) and polynomials over F_{p^m} (elements of K).
"""

from __future__ import annotations

import re
from typing import Any, Protocol

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


class Ring(Protocol):
    def from_int(self, n: int) -> Any: ...
    def variable(self, name: str) -> Any: ...
    def add(self, a: Any, b: Any) -> Any: ...
    def sub(self, a: Any, b: Any) -> Any: ...
    def mul(self, a: Any, b: Any) -> Any: ...
    def neg(self, a: Any) -> Any: ...
    def power(self, a: Any, n: int) -> Any: ...


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"cannot tokenize {text[pos:]!r}")
        number, name, sym = match.groups()
        if number is not None:
            tokens.append(("int", number))
        elif name is not None:
            tokens.append(("name", name))
        else:
            if sym not in "+-*^()/":
                raise ParseError(f"unexpected character {sym!r}")
            tokens.append(("sym", sym))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]], ring: Ring):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, sym: str) -> None:
        tok = self.take()
        if tok != ("sym", sym):
            raise ParseError(f"expected {sym!r}, found {tok[1]!r}")

    def expr(self) -> Any:
        value = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = self.ring.add(value, rhs) if op == "+" else self.ring.sub(value, rhs)
        return value

    def term(self) -> Any:
        value = self.unary()
        while self.peek() == ("sym", "*"):
            self.take()
            value = self.ring.mul(value, self.unary())
        return value

    def unary(self) -> Any:
        if self.peek() == ("sym", "-"):
            self.take()
            return self.ring.neg(self.unary())
        return self.power()

    def power(self) -> Any:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            kind, text = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer")
            return self.ring.power(base, int(text))
        return base

    def atom(self) -> Any:
        kind, text = self.take()
        if kind == "int":
            return self.ring.from_int(int(text))
        if kind == "name":
            return self.ring.variable(text)
        if text == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {text!r}")


def parse_expression(text: str, ring: Ring) -> Any:
    """Parse ``text`` (no top-level division) and fold it through ``ring``."""
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    parser = _Parser(tokens, ring)
    value = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input at {parser.peek()[1]!r}")
    return value


def split_fraction(text: str) -> tuple[str, str | None]:
    """Split at the single top-level '/', if any."""
    depth = 0
    cut = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced parentheses")
        elif ch == "/" and depth == 0:
            if cut is not None:
                raise ParseError("at most one top-level '/' is allowed")
            cut = i
    if depth != 0:
        raise ParseError("unbalanced parentheses")
    if cut is None:
        return text, None
    return text[:cut], text[cut + 1:]
