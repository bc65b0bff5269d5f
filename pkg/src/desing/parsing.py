"""Polynomial expressions over named variables.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('-' | '+') factor | atom ('^' INT)?
    atom   := NUMBER | NAME | '(' expr ')'

NUMBER is an integer or a rational literal like ``3/4``. Multiplication
must be written out.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import Poly


class PolySyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.column, self.pos = line, col, pos


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*^()]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolySyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.index = {v: k for k, v in enumerate(variables)}
        self.n = len(variables)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise PolySyntaxError(msg, self.text, tok.pos)

    def parse(self) -> Poly:
        p = self.expr()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r}; multiplication must be explicit")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Poly:
        t = self.peek()
        if t.kind == "op" and t.text in ("-", "+"):
            self.take()
            p = self.factor()
            return -p if t.text == "-" else p
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            e = self.peek()
            if e.kind != "num" or "/" in e.text:
                self.fail("exponent must be a non-negative integer", e)
            self.take()
            base = base ** int(e.text)
        return base

    def atom(self) -> Poly:
        t = self.take()
        if t.kind == "num":
            return Poly.const(Fraction(t.text), self.n)
        if t.kind == "name":
            if t.text not in self.index:
                self.fail(f"unknown variable {t.text!r}", t)
            return Poly.var(self.index[t.text], self.n)
        if t.kind == "op" and t.text == "(":
            p = self.expr()
            if self.peek().text != ")":
                self.fail("expected ')'")
            self.take()
            return p
        if t.kind == "end":
            self.fail("unexpected end of input", t)
        self.fail(f"unexpected {t.text!r}", t)


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse ``text`` into a polynomial in the given variables."""
    if text.strip() == "":
        raise PolySyntaxError("empty expression", text, 0)
    return _Parser(text, variables).parse()
