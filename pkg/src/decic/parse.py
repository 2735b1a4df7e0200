"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' nat)?
    base   := nat | nat '/' nat | 'i' | 't' | ident | '(' expr ')'

``i`` is the imaginary unit (QQ(i) rings only) and ``t`` the generator of a
simple extension QQ[t]/(m), unless the ring has variables of those names.
"""

from __future__ import annotations

import re
from typing import Mapping

from .field import GF_KIND, QQI_KIND, EXT_KIND, FieldError
from .poly import Polynomial, Ring

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}" + (f": {text!r}" if text else ""))
        self.position = position


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            tokens.append(("nat", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring, names: Mapping[str, Polynomial] | None):
        self.text = text
        self.ring = ring
        self.names = names or {}
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str | None = None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return p

    def expr(self) -> Polynomial:
        negate = False
        if self.peek()[0] == "-":
            self.take()
            negate = True
        acc = self.term()
        if negate:
            acc = -acc
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        b = self.base()
        if self.peek()[0] == "^":
            self.take()
            n = int(self.take("nat")[1])
            b = b**n
        return b

    def base(self) -> Polynomial:
        kind, val, pos = self.peek()
        ring = self.ring
        K = ring.field
        if kind == "nat":
            self.take()
            num = int(val)
            if self.peek()[0] == "/":
                self.take()
                den = int(self.take("nat")[1])
                if den == 0:
                    raise ParseError("zero denominator", pos, self.text)
                if K.kind == GF_KIND and den % K.p == 0:
                    raise ParseError(f"denominator divisible by {K.p}", pos, self.text)
                return ring.constant(K.div(K.from_int(num), K.from_int(den)))
            return ring.constant(num)
        if kind == "ident":
            self.take()
            if val in ring.variables:
                return ring.gen(val)
            if val in self.names:
                q = self.names[val]
                if q.ring != ring:
                    raise ParseError(f"{val!r} is bound in a different ring", pos, self.text)
                return q
            if val == "i":
                if K.kind != QQI_KIND:
                    raise ParseError("'i' is only available over QQ(i)", pos, self.text)
                return ring.constant(K.imaginary_unit())
            if K.kind == EXT_KIND and val == K.name_t:
                return ring.constant(K.generator())
            raise ParseError(f"unknown identifier {val!r}", pos, self.text)
        if kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", pos, self.text)


def parse(text: str, ring: Ring, names: Mapping[str, Polynomial] | None = None) -> Polynomial:
    """Parse ``text`` into a polynomial of ``ring``.

    ``names`` optionally binds extra identifiers to polynomials of the same ring.
    """
    try:
        return _Parser(text, ring, names).parse()
    except FieldError as exc:
        raise ParseError(str(exc), 0, text) from exc
