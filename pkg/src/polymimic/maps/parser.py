"""Recursive-descent parser for polynomial maps.

Grammar (whitespace is insignificant)::

    map    := ("(" | "[") poly { "," poly } (")" | "]")
    poly   := ["+" | "-"] term { ("+" | "-") term }
    term   := factor { ["*"] factor }
    factor := atom [ "^" int ]
    atom   := int | "[" digits "]" | var | "(" poly ")"
    var    := "x" int | "x" | "y" | "z"

``x``, ``y``, ``z`` abbreviate x1, x2, x3 when n <= 3.  With ``param=True``
the letter ``z`` (or ``Z``) is the parameter of F_q[Z] instead.
"""

from __future__ import annotations

import re

from ..fields import FieldCtx, FieldError
from ..rational import ZPoly, zpoly_ring
from .poly import Poly, PolyMap


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|(\[[0-9.]*\])|(x\d*|X\d*|[yzYZ])|(.))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos:  # trailing whitespace
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            toks.append(("int", m.group(1), start))
        elif m.group(2):
            toks.append(("elem", m.group(2)[1:-1], start))
        elif m.group(3):
            toks.append(("var", m.group(3), start))
        elif m.group(4):
            ch = m.group(4)
            if ch.isspace():
                pos = m.end()
                continue
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, ctx: FieldCtx, n: int, param: bool):
        self.toks = _tokenize(text)
        self.k = 0
        self.ctx = ctx
        self.n = n
        self.param = param
        self.ring = zpoly_ring(ctx) if param else ctx

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, ops):
        kind, val, pos = self.take()
        if kind != "op" or val not in ops:
            raise ParseError(f"expected {' or '.join(repr(o) for o in ops)}, got {val or 'end of input'!r}", pos)
        return val

    def const(self, c):
        return Poly.const(self.ring, self.n, c)

    def parse_map(self):
        opener = self.expect("([")
        closer = ")" if opener == "(" else "]"
        comps = [self.parse_poly()]
        while self.peek()[:2] == ("op", ","):
            self.take()
            comps.append(self.parse_poly())
        self.expect(closer)
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r} after the map", pos)
        if len(comps) != self.n:
            raise ParseError(f"expected {self.n} components, got {len(comps)}", 0)
        return PolyMap(self.ring, comps)

    def parse_poly(self):
        sign = 1
        if self.peek()[:2] in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.parse_term()
        if sign < 0:
            acc = -acc
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.parse_term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _starts_factor(self):
        kind, val, _ = self.peek()
        return kind in ("int", "elem", "var") or (kind == "op" and val == "(")

    def parse_term(self):
        acc = self.parse_factor()
        while True:
            if self.peek()[:2] == ("op", "*"):
                self.take()
                acc = acc * self.parse_factor()
            elif self._starts_factor():
                acc = acc * self.parse_factor()
            else:
                return acc

    def parse_factor(self):
        base = self.parse_atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("expected an integer exponent", pos)
            base = base ** int(val)
        return base

    def parse_atom(self):
        kind, val, pos = self.take()
        F = self.ctx
        if kind == "int":
            c = F.from_int(int(val))
            return self.const(zpoly_ring(F).from_base(c) if self.param else c)
        if kind == "elem":
            try:
                c = F.parse_element(val)
            except (FieldError, ValueError):
                raise ParseError(f"{val!r} is not an element of F_{F.q}", pos) from None
            return self.const(zpoly_ring(F).from_base(c) if self.param else c)
        if kind == "var":
            name = val.lower()
            if self.param and name == "z":
                return self.const(ZPoly.z(F))
            if name == "x":
                idx = 1
            elif name in ("y", "z"):
                if self.n > 3:
                    raise ParseError(f"alias {val!r} needs n <= 3", pos)
                idx = 2 if name == "y" else 3
            else:
                idx = int(name[1:])
            if not 1 <= idx <= self.n:
                raise ParseError(f"variable {val!r} outside x1..x{self.n}", pos)
            return Poly.var(self.ring, self.n, idx)
        if kind == "op" and val == "(":
            inner = self.parse_poly()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse_map(text: str, ctx: FieldCtx, n: int, param: bool = False) -> PolyMap:
    return _Parser(text, ctx, n, param).parse_map()


def parse_poly(text: str, ctx: FieldCtx, n: int, param: bool = False) -> Poly:
    p = _Parser(text, ctx, n, param)
    out = p.parse_poly()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    return out
