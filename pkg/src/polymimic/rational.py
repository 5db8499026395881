"""Univariate polynomials in the parameter Z and reduced rational functions.

``ZPoly`` is a dense coefficient tuple over a ``FieldCtx`` (Z^0 first).
``RatFunc`` keeps numerator and denominator coprime with a monic denominator.
The two ring wrappers ``ZPolyRing`` and ``RatFuncField`` expose the same
method names as ``FieldCtx`` so that ``Poly`` can use any of them as its
coefficient ring.
"""

from __future__ import annotations

import functools

from .fields import FieldCtx, embed_field


class ZPoly:
    __slots__ = ("ctx", "coeffs", "_hash")

    def __init__(self, ctx: FieldCtx, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.ctx = ctx
        self.coeffs = tuple(c)
        self._hash = None

    @classmethod
    def const(cls, ctx, a: int) -> ZPoly:
        return cls(ctx, (a,))

    @classmethod
    def z(cls, ctx) -> ZPoly:
        return cls(ctx, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        if isinstance(other, ZPoly):
            return self.coeffs == other.coeffs and self.ctx is other.ctx
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Z", self.ctx.q, self.coeffs))
        return self._hash

    def __add__(self, other: ZPoly) -> ZPoly:
        F = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = F.add(out[i], x)
        return ZPoly(F, out)

    def __neg__(self) -> ZPoly:
        return ZPoly(self.ctx, [self.ctx.neg(x) for x in self.coeffs])

    def __sub__(self, other: ZPoly) -> ZPoly:
        return self + (-other)

    def __mul__(self, other: ZPoly) -> ZPoly:
        F = self.ctx
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZPoly(F)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return ZPoly(F, out)

    def scale(self, c: int) -> ZPoly:
        return ZPoly(self.ctx, [self.ctx.mul(c, x) for x in self.coeffs])

    def __pow__(self, e: int) -> ZPoly:
        result = ZPoly.const(self.ctx, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def divmod(self, other: ZPoly):
        F = self.ctx
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        inv_lead = F.inv(other.lead)
        qt = [0] * max(len(r) - db, 0)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c:
                f = F.mul(c, inv_lead)
                qt[k - db] = f
                for j, y in enumerate(other.coeffs):
                    r[k - db + j] = F.sub(r[k - db + j], F.mul(f, y))
        return ZPoly(F, qt), ZPoly(F, r[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> ZPoly:
        if self.is_zero():
            return self
        return self.scale(self.ctx.inv(self.lead))

    def derivative(self) -> ZPoly:
        F = self.ctx
        return ZPoly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, c: int, target: FieldCtx | None = None) -> int:
        """Evaluate at c, an element of ``target`` (default: own field)."""
        F = self.ctx
        if target is None or target is F:
            acc = 0
            for x in reversed(self.coeffs):
                acc = F.add(F.mul(acc, c), x)
            return acc
        emb = embed_field(F, target)
        acc = 0
        for x in reversed(self.coeffs):
            acc = target.add(target.mul(acc, c), emb(x))
        return acc

    def map_coeffs(self, fn, ctx: FieldCtx) -> ZPoly:
        return ZPoly(ctx, [fn(x) for x in self.coeffs])

    def __repr__(self):
        return f"ZPoly({self.render()})"

    def render(self, var: str = "z") -> str:
        F = self.ctx
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            cs = F.render(c)
            cs = cs if F.r == 1 else f"[{cs}]"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)


def zgcd(a: ZPoly, b: ZPoly) -> ZPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(g: ZPoly) -> ZPoly:
    """rad(g): product of the distinct monic irreducible factors of g."""
    F = g.ctx
    g = g.monic()
    if g.degree <= 0:
        return ZPoly.const(F, 1)
    dg = g.derivative()
    if dg.is_zero():
        # g = h(Z^p); take p-th roots of the coefficients
        p = F.p
        root = [F.pow(g.coeffs[i], F.q // p) for i in range(0, len(g.coeffs), p)]
        return squarefree_part(ZPoly(F, root))
    c = zgcd(g, dg)
    w = g // c
    rest = c
    while True:
        y = zgcd(w, rest)
        if y.degree <= 0:
            break
        rest = rest // y
    if rest.degree <= 0:
        return w.monic()
    return (w * squarefree_part(rest)).monic()


class RatFunc:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: ZPoly, den: ZPoly | None = None, reduce: bool = True):
        F = num.ctx
        if den is None:
            den = ZPoly.const(F, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if num.is_zero():
                den = ZPoly.const(F, 1)
            else:
                g = zgcd(num, den)
                if g.degree > 0:
                    num, den = num // g, den // g
            lc = den.lead
            if lc != 1:
                inv = F.inv(lc)
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def ctx(self) -> FieldCtx:
        return self.num.ctx

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, o: RatFunc) -> RatFunc:
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o: RatFunc) -> RatFunc:
        return RatFunc(self.num * o.num, self.den * o.den)

    def inverse(self) -> RatFunc:
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, o):
        return self * o.inverse()

    def __call__(self, c: int, target: FieldCtx | None = None) -> int:
        T = target or self.ctx
        d = self.den(c, target)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return T.div(self.num(c, target), d)

    def render(self, var: str = "z") -> str:
        if self.is_poly():
            return self.num.render(var)
        return f"({self.num.render(var)})/({self.den.render(var)})"

    def __repr__(self):
        return f"RatFunc({self.render()})"


class ZPolyRing:
    """F_q[Z] as a coefficient ring."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.zero = ZPoly(ctx)
        self.one = ZPoly.const(ctx, 1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, e):
        return a ** e

    def is_zero(self, a):
        return a.is_zero()

    def from_int(self, k):
        return ZPoly.const(self.ctx, self.ctx.from_int(k))

    def from_base(self, a: int):
        return ZPoly.const(self.ctx, a)

    def inv(self, a):
        if a.degree != 0:
            raise ZeroDivisionError(f"{a.render()} is not a unit of F_q[Z]")
        return ZPoly.const(self.ctx, self.ctx.inv(a.coeffs[0]))

    def div(self, a, b):
        return a * self.inv(b)

    def render(self, a) -> str:
        return a.render()

    def specialize(self, a, c: int, target: FieldCtx) -> int:
        return a(c, target)

    def __eq__(self, other):
        return isinstance(other, ZPolyRing) and other.ctx is self.ctx

    def __hash__(self):
        return hash(("ZPolyRing", self.ctx.q))

    def __repr__(self):
        return f"F_{self.ctx.q}[Z]"


class RatFuncField:
    """F_q(Z) as a coefficient field."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.zero = RatFunc(ZPoly(ctx))
        self.one = RatFunc(ZPoly.const(ctx, 1))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, e):
        if e < 0:
            return self.pow(a.inverse(), -e)
        return RatFunc(a.num ** e, a.den ** e, reduce=False)

    def is_zero(self, a):
        return a.is_zero()

    def from_int(self, k):
        return RatFunc(ZPoly.const(self.ctx, self.ctx.from_int(k)))

    def from_base(self, a: int):
        return RatFunc(ZPoly.const(self.ctx, a))

    def inv(self, a):
        return a.inverse()

    def div(self, a, b):
        return a / b

    def render(self, a) -> str:
        return a.render()

    def specialize(self, a, c: int, target: FieldCtx) -> int:
        return a(c, target)

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and other.ctx is self.ctx

    def __hash__(self):
        return hash(("RatFuncField", self.ctx.q))

    def __repr__(self):
        return f"F_{self.ctx.q}(Z)"


@functools.lru_cache(maxsize=None)
def zpoly_ring(ctx: FieldCtx) -> ZPolyRing:
    return ZPolyRing(ctx)


@functools.lru_cache(maxsize=None)
def ratfunc_field(ctx: FieldCtx) -> RatFuncField:
    return RatFuncField(ctx)


def as_ratfunc(a) -> RatFunc:
    if isinstance(a, RatFunc):
        return a
    return RatFunc(a)
