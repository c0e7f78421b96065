"""Recursive-descent parser for polynomials in x and scalar literals in t.

Grammar (whitespace is free, ``**`` is accepted for ``^``)::

    expr   := sign? term (("+" | "-") term)*
    term   := factor (("*" | "/")? factor)*      # juxtaposition multiplies
    factor := sign? atom ("^" INT)?
    atom   := INT | "x" | "t" | "(" expr ")"

Division is only allowed by a nonzero scalar.
"""

from __future__ import annotations

from dataclasses import dataclass

from .basefield import BaseField
from .poly import Poly


class ParseError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        before = text[:pos]
        self.line = before.count("\n") + 1
        self.column = pos - (before.rfind("\n") + 1) + 1
        self.msg = msg
        super().__init__(f"line {self.line}, column {self.column}: {msg}")


@dataclass(frozen=True)
class _Tok:
    kind: str  # int, name, op, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(_Tok("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Tok("name", text[i:j], i))
            i = j
        elif text.startswith("**", i):
            out.append(_Tok("op", "^", i))
            i += 2
        elif ch in "+-*/^()":
            out.append(_Tok("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", text, i)
    out.append(_Tok("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str, K: BaseField, allow_x: bool):
        self.text = text
        self.K = K
        self.allow_x = allow_x
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, self.text, tok.pos)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Poly:
        if self.tok.kind == "end":
            self.fail("empty expression")
        out = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return out

    def expr(self) -> Poly:
        neg = False
        if self.accept("-"):
            neg = True
        elif self.accept("+"):
            pass
        acc = self.term()
        if neg:
            acc = -acc
        while True:
            if self.accept("+"):
                acc = acc + self.term()
            elif self.accept("-"):
                acc = acc - self.term()
            else:
                return acc

    def _starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("int", "name") or (t.kind == "op" and t.text == "(")

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            if self.accept("*"):
                acc = acc * self.factor()
            elif self.tok.kind == "op" and self.tok.text == "/":
                slash = self.tok
                self.i += 1
                d = self.factor()
                if d.degree != 0:
                    self.fail("division by a non-scalar or zero", slash)
                acc = acc * (self.K.one / d[0])
            elif self._starts_atom():
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Poly:
        if self.accept("-"):
            return -self.factor()
        if self.accept("+"):
            return self.factor()
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.i += 1
            neg = self.accept("-")
            if self.tok.kind != "int":
                self.fail("exponent must be an integer")
            e = int(self.tok.text)
            self.i += 1
            if neg:
                if base.degree != 0:
                    self.fail("negative power of a non-scalar")
                return Poly(self.K, [base[0] ** (-e)])
            return base**e
        return base

    def atom(self) -> Poly:
        K = self.K
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Poly(K, [K.embed(int(t.text))])
        if t.kind == "name":
            self.i += 1
            if t.text == "x":
                if not self.allow_x:
                    self.fail("x is not allowed in a scalar", t)
                return Poly.x(K)
            if t.text == "t":
                if K.kind == "qp":
                    self.fail("t is not defined over Q with a p-adic valuation", t)
                return Poly(K, [K.t()])
            self.fail(f"unknown name {t.text!r}", t)
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                self.fail("expected ')'")
            return inner
        if t.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {t.text!r}")


def parse_poly(text: str, K: BaseField) -> Poly:
    """Parse a polynomial in x over K, e.g. ``"x^4 + 2*x + 2"`` or ``"x^2 - t/(1+t)"``."""
    return _Parser(text, K, allow_x=True).parse()


def parse_scalar(text: str, K: BaseField):
    """Parse a scalar literal such as ``"-3/4"`` or ``"t^2/(1+t)"``."""
    p = _Parser(text, K, allow_x=False).parse()
    return p[0] if p else K.zero
