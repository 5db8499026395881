"""Finite fields F_{p^r}, embeddings between them, and the point codec.

Elements are stored as integers ``Σ c_i p^i`` where ``c_i`` are the
coefficients of the residue class modulo the field's defining polynomial.
That index is the canonical element order used everywhere in the package
(point enumeration, tie-breaking, rendering).

Multiplication goes through log/exp tables and addition through Zech
logarithms, so every operation is O(1) once a field is built.  Fields are
memoized: ``field_create(2, 2) is field_create(2, 2)``.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass

import numpy as np

DEFAULT_BOUND = 1 << 20


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- dense polynomials over Z/pZ, coefficient lists low degree first --------

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod(a, m, p):
    """Remainder of a modulo the monic polynomial m over Z/pZ."""
    a = list(a)
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] % p
        if c:
            for j in range(dm + 1):
                a[k - dm + j] = (a[k - dm + j] - c * m[j]) % p
    return _trim(x % p for x in a[:dm])


def _monic_polys(p, deg):
    """All monic polynomials of the given degree, low coefficients varying fastest."""
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def is_irreducible(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(poly)
    d = len(poly) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    for k in range(1, d // 2 + 1):
        for div in _monic_polys(p, k):
            if not _pmod(poly, div, p):
                return False
    return True


def smallest_irreducible(p: int, r: int):
    """Lexicographically smallest monic irreducible of degree r.

    Coefficient vectors ``(c_0, ..., c_{r-1})`` are compared with ``c_0`` first.
    """
    for low in itertools.product(range(p), repeat=r):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {r} over F_{p}")  # pragma: no cover


class FieldCtx:
    """The finite field F_q, q = p^r, realized as (Z/pZ)[x]/(modulus)."""

    def __init__(self, p: int, r: int, modulus):
        self.p = p
        self.r = r
        self.q = p ** r
        self.modulus = tuple(modulus)
        self._build_tables()

    # construction ----------------------------------------------------------

    def _digits(self, a: int):
        out = []
        for _ in range(self.r):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, digits) -> int:
        v = 0
        for d in reversed(list(digits)):
            v = v * self.p + d
        return v

    def _slow_mul(self, a: int, b: int) -> int:
        p = self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.r)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        red = _pmod(prod, self.modulus, p)
        return self._from_digits(red + [0] * (self.r - len(red)))

    def _build_tables(self):
        q, p = self.q, self.p
        n = q - 1
        if q == 2:
            self._exp = [1, 1]
            self._log = [0, 0]
            self.primitive = 1
        else:
            for g in range(2, q) if self.r > 1 else range(1, q):
                exp = [1] * (n + 1)
                x = 1
                ok = True
                for k in range(1, n + 1):
                    x = self._slow_mul(x, g)
                    exp[k] = x
                    if x == 1 and k < n:
                        ok = False
                        break
                if ok:
                    break
            else:  # pragma: no cover
                raise FieldError("no primitive element")
            self.primitive = g
            self._exp = exp
            log = [0] * q
            for k in range(n):
                log[exp[k]] = k
            self._log = log
        # Zech table: zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
        zech = [-1] * max(n, 1)
        for k in range(n):
            e = self._exp[k]
            s = e - (e % p) + ((e % p) + 1) % p
            zech[k] = self._log[s] if s else -1
        self._zech = zech
        self._np_exp = np.array(self._exp[:n] * 2 + [1], dtype=np.int64)
        self._np_log = np.array(self._log, dtype=np.int64)
        self._np_zech = np.array(zech, dtype=np.int64)

    # scalar arithmetic on element indices -----------------------------------

    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.r == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self._exp[(la + z) % (self.q - 1)]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.r == 1:
            return self.p - a
        return self._exp[(self._log[a] + (self.q - 1) // 2) % (self.q - 1)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.q)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, k: int) -> int:
        return k % self.p

    def is_zero(self, a) -> bool:
        return a == 0

    def from_base(self, a: int) -> int:
        return a

    def specialize(self, a: int, c: int, target: "FieldCtx") -> int:
        # coefficients do not depend on the parameter
        return embed_field(self, target)(a)

    def elements(self) -> range:
        return range(self.q)

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p ** times)

    # vectorized arithmetic on numpy arrays of indices ---------------------

    def vadd(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.r == 1:
            return (a + b) % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.broadcast_to(np.asarray(b, dtype=np.int64), a.shape)
        out = np.where(a == 0, b, a).copy()
        both = (a != 0) & (b != 0)
        if both.any():
            la = self._np_log[a[both]]
            z = self._np_zech[(self._np_log[b[both]] - la) % (self.q - 1)]
            res = np.where(z < 0, 0, self._np_exp[(la + np.where(z < 0, 0, z)) % (self.q - 1)])
            out[both] = res
        return out

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.q == 2:
            return a & b
        s = self._np_log[a] + self._np_log[b]
        return np.where((a == 0) | (b == 0), 0, self._np_exp[s % (self.q - 1)])

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if self.q == 2:
            return a.copy()
        return np.where(a == 0, 0, self._np_exp[(self._np_log[a] * e) % (self.q - 1)])

    # rendering --------------------------------------------------------------

    def render(self, a: int) -> str:
        """Base-p digits, x^0 first; high-order zero digits are dropped."""
        digits = _trim(self._digits(a)) or [0]
        if self.p <= 10:
            return "".join(str(d) for d in digits)
        return ".".join(str(d) for d in digits)

    def parse_element(self, text: str) -> int:
        text = text.strip()
        digits = [int(t) for t in text.split(".")] if "." in text or self.p > 10 else [int(ch) for ch in text]
        if not digits or len(digits) > self.r or any(d < 0 or d >= self.p for d in digits):
            raise FieldError(f"{text!r} is not an element of F_{self.q}")
        return self._from_digits(digits + [0] * (self.r - len(digits)))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, r={self.r}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return (field_create, (self.p, self.r))

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.r}"


@functools.lru_cache(maxsize=None)
def _field(p: int, r: int) -> FieldCtx:
    return FieldCtx(p, r, smallest_irreducible(p, r))


def field_create(p: int, r: int = 1, bound: int = DEFAULT_BOUND) -> FieldCtx:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if r < 1:
        raise FieldError("extension degree must be >= 1")
    if p ** r > bound:
        raise FieldError(f"F_{p}^{r} exceeds the element bound {bound}")
    return _field(p, r)


def parse_field_spec(text: str, bound: int = DEFAULT_BOUND) -> FieldCtx:
    """Parse ``"p^r"`` or a bare prime power ``"q"``."""
    try:
        if "^" in text:
            p, r = (int(t) for t in text.split("^"))
        else:
            p, r = _prime_power(int(text))
    except ValueError:
        raise FieldError(f"bad field spec {text!r}, expected p^r") from None
    return field_create(p, r, bound)


def _prime_power(q: int):
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    r = 0
    while q % p == 0:
        q //= p
        r += 1
    if q != 1:
        raise FieldError(f"{p ** r * q} is not a prime power")
    return p, r


@dataclass(frozen=True)
class FqElement:
    """User-facing field element; arithmetic is delegated to the context."""

    ctx: FieldCtx
    value: int

    @classmethod
    def from_coeffs(cls, ctx: FieldCtx, coeffs) -> FqElement:
        coeffs = list(coeffs)
        if len(coeffs) != ctx.r or any(not 0 <= c < ctx.p for c in coeffs):
            raise FieldError("coefficient vector must have r entries in [0, p)")
        return cls(ctx, ctx._from_digits(coeffs))

    @property
    def coeffs(self) -> tuple:
        return tuple(self.ctx._digits(self.value))

    def _other(self, other) -> int:
        if isinstance(other, FqElement):
            if other.ctx is not self.ctx:
                raise FieldError("operands belong to different fields")
            return other.value
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return FqElement(self.ctx, self.ctx.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FqElement(self.ctx, self.ctx.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FqElement(self.ctx, self.ctx.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FqElement(self.ctx, self.ctx.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FqElement(self.ctx, self.ctx.div(self.value, self._other(other)))

    def __neg__(self):
        return FqElement(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return FqElement(self.ctx, self.ctx.pow(self.value, e))

    def inverse(self):
        return FqElement(self.ctx, self.ctx.inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.ctx.render(self.value)


def fq_arith(op: str, a: FqElement, b=None) -> FqElement:
    """Dispatch for add, sub, mul, div, pow, inv."""
    if op == "inv":
        return a.inverse()
    if op == "pow":
        if not isinstance(b, int) or b < 0:
            raise FieldError("pow needs a nonnegative integer exponent")
        return a ** b
    table = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in table:
        raise FieldError(f"unknown field operation {op!r}")
    if isinstance(b, FqElement) and b.ctx is not a.ctx:
        raise FieldError("operands belong to different fields")
    return table[op](b)


class Embedding:
    """Ring embedding F_{p^r} -> F_{p^{rk}} fixed by the image of x."""

    def __init__(self, src: FieldCtx, dst: FieldCtx, image_of_generator: int):
        self.src = src
        self.dst = dst
        self.image_of_generator = image_of_generator
        beta_pows = [dst.pow(image_of_generator, i) for i in range(src.r)]
        table = []
        for a in range(src.q):
            acc = 0
            for c, bp in zip(src._digits(a), beta_pows):
                if c:
                    acc = dst.add(acc, dst.mul(dst.from_int(c), bp))
            table.append(acc)
        self.table = table
        self.np_table = np.array(table, dtype=np.int64)

    def __call__(self, a: int) -> int:
        return self.table[a]

    def check_homomorphism(self, sample: int = 4000, seed: int = 0) -> bool:
        s, d, t = self.src, self.dst, self.table
        if s.q <= 256:
            pairs = itertools.product(range(s.q), repeat=2)
        else:
            rng = random.Random(seed)
            pairs = ((rng.randrange(s.q), rng.randrange(s.q)) for _ in range(sample))
        for a, b in pairs:
            if t[s.add(a, b)] != d.add(t[a], t[b]) or t[s.mul(a, b)] != d.mul(t[a], t[b]):
                return False
        return len(set(t)) == s.q and t[1] == 1


@functools.lru_cache(maxsize=None)
def _embedding(src: FieldCtx, dst: FieldCtx) -> Embedding:
    mod = src.modulus
    for beta in range(dst.q):
        acc = 0
        for c in reversed(mod):
            acc = dst.add(dst.mul(acc, beta), dst.from_int(c))
        if acc == 0:
            emb = Embedding(src, dst, beta)
            if not emb.check_homomorphism():  # pragma: no cover
                raise FieldError("embedding failed the homomorphism check")
            return emb
    raise FieldError("no root of the source modulus in the target field")  # pragma: no cover


def embed_field(src: FieldCtx, dst: FieldCtx) -> Embedding:
    if src.p != dst.p or dst.r % src.r:
        raise FieldError(f"F_{src.q} does not embed in F_{dst.q}")
    return _embedding(src, dst)


def extension(ctx: FieldCtx, m: int, bound: int = DEFAULT_BOUND) -> FieldCtx:
    """F_{q^m} for ctx = F_q."""
    return field_create(ctx.p, ctx.r * m, bound)


# -- point codec ------------------------------------------------------------

def elem_index(ctx: FieldCtx, e) -> int:
    if isinstance(e, FqElement):
        return e.value
    return int(e)


def point_to_index(ctx: FieldCtx, point) -> int:
    """Σ elem_index(u_i) Q^{n-i}; the first coordinate is most significant."""
    idx = 0
    for u in point:
        v = elem_index(ctx, u)
        if not 0 <= v < ctx.q:
            raise FieldError("coordinate outside the field")
        idx = idx * ctx.q + v
    return idx


def index_to_point(ctx: FieldCtx, index: int, n: int) -> tuple:
    Q = ctx.q
    if not 0 <= index < Q ** n:
        raise FieldError(f"index {index} outside [0, {Q}^{n})")
    out = []
    for _ in range(n):
        out.append(index % Q)
        index //= Q
    return tuple(reversed(out))


def all_points(ctx: FieldCtx, n: int) -> np.ndarray:
    """Array of shape (Q^n, n): row i is the point with index i."""
    Q = ctx.q
    idx = np.arange(Q ** n, dtype=np.int64)
    cols = []
    for k in range(n - 1, -1, -1):
        cols.append((idx // Q ** k) % Q)
    return np.stack(cols, axis=1) if cols else idx.reshape(-1, 0)


def points_to_indices(ctx: FieldCtx, pts: np.ndarray) -> np.ndarray:
    Q = ctx.q
    idx = np.zeros(pts.shape[0], dtype=np.int64)
    for k in range(pts.shape[1]):
        idx = idx * Q + pts[:, k]
    return idx
