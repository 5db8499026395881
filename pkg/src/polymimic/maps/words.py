"""Generator symbols and automorphism words.

A word ``[L1, L2, ..., Lk]`` denotes the composite L1∘L2∘...∘Lk, so the last
letter acts first on points.  This is the orientation under which the
closed forms for the B_1 and T_m gadgets come out exactly (see the tests in
``test_orientation.py``).

Each letter is a ``(symbol, exponent)`` pair with exponent ±1; a formal
inverse is resolved only when the word is turned into a map or a
permutation.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..fields import FieldCtx
from .poly import Poly, PolyMap


class WordError(ValueError):
    pass


def _ring_char(ring) -> int:
    return ring.p if isinstance(ring, FieldCtx) else ring.ctx.p


# -- symbols -------------------------------------------------------------------


@dataclass(frozen=True)
class T:
    """Translation X_i -> X_i + c."""

    i: int
    c: object
    kind = "T"

    def to_map(self, ring, n):
        comps = [Poly.var(ring, n, k) for k in range(1, n + 1)]
        comps[self.i - 1] = comps[self.i - 1] + Poly.const(ring, n, self.c)
        return PolyMap(ring, comps)

    def inverse(self, ring):
        return T(self.i, ring.neg(self.c))

    def map_coeffs(self, fn):
        return T(self.i, fn(self.c))

    def check(self, ring, n):
        if not 1 <= self.i <= n:
            raise WordError(f"T index {self.i} outside 1..{n}")


@dataclass(frozen=True)
class S:
    """Scaling X_i -> c X_i, c a unit."""

    i: int
    c: object
    kind = "S"

    def to_map(self, ring, n):
        comps = [Poly.var(ring, n, k) for k in range(1, n + 1)]
        comps[self.i - 1] = comps[self.i - 1].scale(self.c)
        return PolyMap(ring, comps)

    def inverse(self, ring):
        return S(self.i, ring.inv(self.c))

    def map_coeffs(self, fn):
        return S(self.i, fn(self.c))

    def check(self, ring, n):
        if not 1 <= self.i <= n:
            raise WordError(f"S index {self.i} outside 1..{n}")
        if ring.is_zero(self.c):
            raise WordError("S needs a nonzero scale")
        ring.inv(self.c)


@dataclass(frozen=True)
class R:
    """Swap of X_i and X_j (identity when i == j)."""

    i: int
    j: int
    kind = "R"

    def to_map(self, ring, n):
        comps = [Poly.var(ring, n, k) for k in range(1, n + 1)]
        comps[self.i - 1], comps[self.j - 1] = comps[self.j - 1], comps[self.i - 1]
        return PolyMap(ring, comps)

    def inverse(self, ring):
        return self

    def map_coeffs(self, fn):
        return self

    def check(self, ring, n):
        if not (1 <= self.i <= n and 1 <= self.j <= n):
            raise WordError(f"R indices ({self.i},{self.j}) outside 1..{n}")


@dataclass(frozen=True)
class E:
    """Elementary map X_i -> X_i + c * prod_{j != i} X_j^{alpha_j}.

    ``alpha`` lists the exponents of the other variables in increasing
    variable order, so it has length n - 1.
    """

    i: int
    alpha: tuple
    c: object
    kind = "E"

    def monomial_exps(self, n):
        e = list(self.alpha[: self.i - 1]) + [0] + list(self.alpha[self.i - 1:])
        return tuple(e)

    def to_map(self, ring, n):
        comps = [Poly.var(ring, n, k) for k in range(1, n + 1)]
        comps[self.i - 1] = comps[self.i - 1] + Poly.monomial(ring, n, self.monomial_exps(n), self.c)
        return PolyMap(ring, comps)

    def inverse(self, ring):
        return E(self.i, self.alpha, ring.neg(self.c))

    def map_coeffs(self, fn):
        return E(self.i, self.alpha, fn(self.c))

    def check(self, ring, n):
        if not 1 <= self.i <= n or len(self.alpha) != n - 1:
            raise WordError(f"E({self.i}, {self.alpha}) malformed for n={n}")
        if any(a < 0 for a in self.alpha):
            raise WordError("negative exponent in E")
        if ring.is_zero(self.c):
            raise WordError("E needs a nonzero scale")


@dataclass(frozen=True)
class J:
    """Triangular map: component k is diag[k] X_k + tails[k](X_{k+1}, ..., X_n).

    With all diag entries 1 and no constant terms this is strictly Jonquière.
    """

    diag: tuple
    tails: tuple
    kind = "J"

    @classmethod
    def from_map(cls, F: PolyMap) -> J:
        n = F.n
        diag, tails = [], []
        for k, p in enumerate(F.comps):
            d = F.ring.zero
            rest = {}
            for e, c in p.terms.items():
                if any(e[: k]) or (e[k] and (e[k] > 1 or sum(e) > 1)):
                    raise WordError("map is not triangular")
                if e[k]:
                    d = c
                else:
                    rest[e] = c
            if F.ring.is_zero(d):
                raise WordError("triangular map with a zero diagonal entry")
            diag.append(d)
            tails.append(Poly(F.ring, n, rest, _clean=True))
        return cls(tuple(diag), tuple(tails))

    def to_map(self, ring, n):
        comps = []
        for k in range(n):
            comps.append(Poly.var(ring, n, k + 1).scale(self.diag[k]) + self.tails[k])
        return PolyMap(ring, comps)

    def inverse(self, ring):
        # back-substitution from the last coordinate upward
        n = len(self.diag)
        inv_comps = [None] * n
        for k in range(n - 1, -1, -1):
            subs = [Poly.var(ring, n, j + 1) if j <= k else inv_comps[j] for j in range(n)]
            t = self.tails[k].substitute(subs)
            inv_comps[k] = (Poly.var(ring, n, k + 1) - t).scale(ring.inv(self.diag[k]))
        return J.from_map(PolyMap(ring, inv_comps))

    def map_coeffs(self, fn):
        return J(tuple(fn(d) for d in self.diag),
                 tuple(Poly(None, t.n, {e: fn(c) for e, c in t.terms.items()}, _clean=True) for t in self.tails))

    def retarget(self, ring):
        """Attach ``ring`` to the tails (after ``map_coeffs``) and drop zeros."""
        return J(self.diag, tuple(Poly(ring, t.n, t.terms) for t in self.tails))

    def is_strict(self, ring) -> bool:
        n = len(self.diag)
        return all(d == ring.one for d in self.diag) and all(
            ring.is_zero(t.coeff((0,) * n)) for t in self.tails)

    def check(self, ring, n):
        if len(self.diag) != n or len(self.tails) != n:
            raise WordError("J data has the wrong length")
        for d in self.diag:
            ring.inv(d)


@dataclass(frozen=True)
class A:
    """Affine map x -> M x + v (rows of M, vector v)."""

    matrix: tuple
    vector: tuple
    kind = "A"

    @classmethod
    def from_map(cls, F: PolyMap) -> A:
        if F.degree > 1:
            raise WordError("map is not affine")
        return cls(tuple(tuple(r) for r in F.linear_matrix()), tuple(F.constant_vector()))

    def to_map(self, ring, n):
        comps = []
        for k in range(n):
            p = Poly.const(ring, n, self.vector[k])
            for j in range(n):
                p = p + Poly.var(ring, n, j + 1).scale(self.matrix[k][j])
            comps.append(p)
        return PolyMap(ring, comps)

    def inverse(self, ring):
        inv = matrix_inverse(ring, self.matrix)
        n = len(self.vector)
        v = []
        for k in range(n):
            acc = ring.zero
            for j in range(n):
                acc = ring.add(acc, ring.mul(inv[k][j], self.vector[j]))
            v.append(ring.neg(acc))
        return A(tuple(tuple(r) for r in inv), tuple(v))

    def map_coeffs(self, fn):
        return A(tuple(tuple(fn(x) for x in r) for r in self.matrix), tuple(fn(x) for x in self.vector))

    def check(self, ring, n):
        if len(self.matrix) != n or len(self.vector) != n or any(len(r) != n for r in self.matrix):
            raise WordError("A data has the wrong shape")
        ring.inv(determinant(ring, self.matrix))


def determinant(ring, M):
    n = len(M)
    if n == 0:
        return ring.one
    if n == 1:
        return M[0][0]
    acc = ring.zero
    for j in range(n):
        if ring.is_zero(M[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        t = ring.mul(M[0][j], determinant(ring, minor))
        acc = ring.sub(acc, t) if j % 2 else ring.add(acc, t)
    return acc


def matrix_inverse(ring, M):
    """Adjugate over det; works over F_q[Z] whenever det is a unit."""
    n = len(M)
    M = [list(r) for r in M]
    det_inv = ring.inv(determinant(ring, M))
    if n == 1:
        return [[det_inv]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            cof = determinant(ring, minor)
            if (i + j) % 2:
                cof = ring.neg(cof)
            out[j][i] = ring.mul(cof, det_inv)
    return out


def epsilon(ring, n: int) -> E:
    """The Derksen elementary E_{1,(p-1,...,p-1)}."""
    p = _ring_char(ring)
    return E(1, (p - 1,) * (n - 1), ring.one)


# -- words ---------------------------------------------------------------------


class AutWord:
    __slots__ = ("ring", "n", "letters")

    def __init__(self, ring, n: int, letters=()):
        self.ring = ring
        self.n = n
        out = []
        for item in letters:
            if isinstance(item, tuple) and len(item) == 2 and item[1] in (1, -1) and not isinstance(item[0], int):
                out.append(item)
            else:
                out.append((item, 1))
        self.letters = tuple(out)

    def validate(self):
        for sym, _ in self.letters:
            sym.check(self.ring, self.n)
        return self

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: AutWord) -> AutWord:
        if other.n != self.n or other.ring != self.ring:
            raise WordError("words live over different ambients")
        return AutWord(self.ring, self.n, self.letters + other.letters)

    def __pow__(self, k: int) -> AutWord:
        if k < 0:
            return self.inverse() ** (-k)
        return AutWord(self.ring, self.n, self.letters * k)

    def inverse(self) -> AutWord:
        return AutWord(self.ring, self.n, tuple((s, -e) for s, e in reversed(self.letters)))

    def conj(self, other: AutWord) -> AutWord:
        """other^{-1} self other."""
        return other.inverse() * self * other

    def __eq__(self, other):
        return isinstance(other, AutWord) and self.n == other.n and self.letters == other.letters

    def __hash__(self):
        return hash((self.n, self.letters))

    def resolved(self):
        """Letters with formal inverses replaced by explicit inverse symbols."""
        return [s if e == 1 else s.inverse(self.ring) for s, e in self.letters]

    def kinds(self) -> set:
        return {s.kind for s, _ in self.letters}

    def map_coeffs(self, fn, ring) -> AutWord:
        out = []
        for s, e in self.letters:
            t = s.map_coeffs(fn)
            if isinstance(t, J):
                t = t.retarget(ring)
            out.append((t, e))
        return AutWord(ring, self.n, out)

    def to_map(self) -> PolyMap:
        return word_to_map(self)

    def __repr__(self):
        return f"AutWord(n={self.n}, {len(self.letters)} letters)"

    def serialize(self) -> str:
        return serialize_word(self)


def _apply_letter(sym, M: PolyMap) -> PolyMap:
    """sym ∘ M with fast paths for the simple letters."""
    ring, n = M.ring, M.n
    comps = list(M.comps)
    if isinstance(sym, T):
        comps[sym.i - 1] = comps[sym.i - 1] + Poly.const(ring, n, sym.c)
    elif isinstance(sym, S):
        comps[sym.i - 1] = comps[sym.i - 1].scale(sym.c)
    elif isinstance(sym, R):
        comps[sym.i - 1], comps[sym.j - 1] = comps[sym.j - 1], comps[sym.i - 1]
    elif isinstance(sym, E):
        mono = Poly.const(ring, n, sym.c)
        for j, k in enumerate(sym.monomial_exps(n)):
            if k:
                mono = mono * comps[j] ** k
        comps[sym.i - 1] = comps[sym.i - 1] + mono
    else:
        return PolyMap(ring, [c.substitute(M.comps) for c in sym.to_map(ring, n).comps])
    return PolyMap(ring, comps)


def word_to_map(w: AutWord) -> PolyMap:
    M = PolyMap.identity(w.ring, w.n)
    for sym in reversed(w.resolved()):
        M = _apply_letter(sym, M)
    return M


def uses_only(w: AutWord, alphabet: str) -> bool:
    """Alphabet checks: "DA" = {T, S, R, ε}; "AffE" = affine letters plus the
    normalized elementaries E_{1,(k_2 p-1, ..., k_n p-1)}."""
    p = _ring_char(w.ring)
    for s, _ in w.letters:
        if s.kind in ("T", "S", "R"):
            continue
        if s.kind == "A" and alphabet == "AffE":
            continue
        if s.kind != "E" or s.i != 1 or s.c != w.ring.one:
            return False
        if alphabet == "DA" and s.alpha != (p - 1,) * (w.n - 1):
            return False
        if alphabet == "AffE" and any(a % p != p - 1 for a in s.alpha):
            return False
    return True


# -- serialization ---------------------------------------------------------------


def _render_coeff(ring, c) -> str:
    if isinstance(ring, FieldCtx):
        return ring.render(c)
    return "{" + ring.render(c) + "}"


def serialize_word(w: AutWord) -> str:
    lines = []
    ring = w.ring
    for s, e in w.letters:
        if isinstance(s, T):
            line = f"T {s.i} {_render_coeff(ring, s.c)}"
        elif isinstance(s, S):
            line = f"S {s.i} {_render_coeff(ring, s.c)}"
        elif isinstance(s, R):
            line = f"R {s.i} {s.j}"
        elif isinstance(s, E):
            line = f"E {s.i} {','.join(map(str, s.alpha))} {_render_coeff(ring, s.c)}"
        elif isinstance(s, J):
            diag = ",".join(_render_coeff(ring, d) for d in s.diag)
            tails = " ; ".join(t.render() for t in s.tails)
            line = f"J {diag} | {tails}"
        else:
            mat = ";".join(",".join(_render_coeff(ring, x) for x in r) for r in s.matrix)
            vec = ",".join(_render_coeff(ring, x) for x in s.vector)
            line = f"A {mat} | {vec}"
        if e == -1:
            line += " INV"
        lines.append(line)
    return "\n".join(lines)


def parse_word(text: str, ctx: FieldCtx, n: int) -> AutWord:
    """Inverse of ``serialize_word`` for words over a finite field."""
    from .parser import parse_poly

    letters = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        exp = 1
        if line.endswith(" INV") or line == "INV":
            exp = -1
            line = line[:-3].strip()
        try:
            head, _, rest = line.partition(" ")
            parts = rest.split()
            if head == "T":
                sym = T(int(parts[0]), ctx.parse_element(parts[1]))
            elif head == "S":
                sym = S(int(parts[0]), ctx.parse_element(parts[1]))
            elif head == "R":
                sym = R(int(parts[0]), int(parts[1]))
            elif head == "E":
                alpha = tuple(int(a) for a in parts[1].split(",")) if parts[1] else ()
                c = ctx.parse_element(parts[2]) if len(parts) > 2 else 1
                sym = E(int(parts[0]), alpha, c)
            elif head == "J":
                diag_s, tails_s = rest.split("|", 1)
                diag = tuple(ctx.parse_element(d) for d in diag_s.split(","))
                tails = tuple(parse_poly(t, ctx, n) for t in tails_s.split(";"))
                sym = J(diag, tails)
            elif head == "A":
                mat_s, vec_s = rest.split("|", 1)
                mat = tuple(tuple(ctx.parse_element(x) for x in r.split(",")) for r in mat_s.split(";"))
                vec = tuple(ctx.parse_element(x) for x in vec_s.split(","))
                sym = A(mat, vec)
            else:
                raise WordError(f"unknown symbol {head!r}")
        except (IndexError, ValueError) as exc:
            raise WordError(f"line {lineno}: cannot parse {raw.strip()!r}: {exc}") from None
        letters.append((sym, exp))
    return AutWord(ctx, n, letters).validate()
