"""Sparse multivariate polynomials and polynomial maps over a coefficient ring.

The coefficient ring is a ``FieldCtx`` (elements are ints), a ``ZPolyRing``
(F_q[Z]) or a ``RatFuncField`` (F_q(Z)).  Exponents are never reduced with
X^q = X here; that only happens implicitly when evaluating at points.
"""

from __future__ import annotations

import numpy as np

from ..fields import FieldCtx, FieldError, all_points, embed_field


def _grlex_key(exps):
    return (-sum(exps), tuple(-e for e in exps))


class Poly:
    __slots__ = ("ring", "n", "terms", "_hash")

    def __init__(self, ring, n: int, terms=None, _clean: bool = False):
        self.ring = ring
        self.n = n
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {tuple(e): c for e, c in terms.items() if not ring.is_zero(c)}
        self.terms = terms
        self._hash = None

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, ring, n):
        return cls(ring, n, {}, _clean=True)

    @classmethod
    def const(cls, ring, n, c):
        return cls(ring, n, {(0,) * n: c})

    @classmethod
    def var(cls, ring, n, i: int):
        """The coordinate function x_i, 1-based."""
        e = [0] * n
        e[i - 1] = 1
        return cls(ring, n, {tuple(e): ring.one}, _clean=True)

    @classmethod
    def monomial(cls, ring, n, exps, c=None):
        return cls(ring, n, {tuple(exps): ring.one if c is None else c})

    # basics -------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i - 1] for e in self.terms), default=-1)

    def variables(self) -> set:
        return {i + 1 for e in self.terms for i, k in enumerate(e) if k}

    def coeff(self, exps):
        return self.terms.get(tuple(exps), self.ring.zero)

    def constant_term(self):
        return self.coeff((0,) * self.n)

    def homogeneous_part(self, d: int) -> Poly:
        return Poly(self.ring, self.n, {e: c for e, c in self.terms.items() if sum(e) == d}, _clean=True)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    # arithmetic -----------------------------------------------------------------

    def __add__(self, other: Poly) -> Poly:
        R = self.ring
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = R.add(out[e], c)
                if R.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly(R, self.n, out, _clean=True)

    def __neg__(self) -> Poly:
        R = self.ring
        return Poly(R, self.n, {e: R.neg(c) for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def scale(self, c) -> Poly:
        R = self.ring
        if R.is_zero(c):
            return Poly.zero(R, self.n)
        return Poly(R, self.n, {e: R.mul(c, x) for e, x in self.terms.items()})

    def __mul__(self, other: Poly) -> Poly:
        R = self.ring
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = R.mul(c1, c2)
                if e in out:
                    out[e] = R.add(out[e], c)
                else:
                    out[e] = c
        return Poly(R, self.n, out)

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.ring, self.n, self.ring.one)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def substitute(self, subs) -> Poly:
        """self(subs[0], ..., subs[n-1]); all subs share a ring and arity."""
        subs = list(subs)
        R = self.ring
        m = subs[0].n if subs else self.n
        cache = [{0: Poly.const(R, m, R.one), 1: s} for s in subs]

        def power(j, k):
            c = cache[j]
            if k not in c:
                best = max(x for x in c if x <= k)
                acc = c[best]
                for kk in range(best + 1, k + 1):
                    acc = acc * subs[j]
                    c[kk] = acc
            return c[k]

        out = Poly.zero(R, m)
        for e, c in self.terms.items():
            t = Poly.const(R, m, c)
            for j, k in enumerate(e):
                if k:
                    t = t * power(j, k)
            out = out + t
        return out

    def map_coeffs(self, fn, ring) -> Poly:
        return Poly(ring, self.n, {e: fn(c) for e, c in self.terms.items()})

    def extend(self, n_new: int) -> Poly:
        """The same polynomial viewed in more variables (new ones appended)."""
        pad = (0,) * (n_new - self.n)
        return Poly(self.ring, n_new, {e + pad: c for e, c in self.terms.items()}, _clean=True)

    def permute_vars(self, perm) -> Poly:
        """Rename x_j -> x_{perm[j]} (perm is a 0-based list)."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.n
            for j, k in enumerate(e):
                ne[perm[j]] = k
            out[tuple(ne)] = c
        return Poly(self.ring, self.n, out, _clean=True)

    # evaluation -----------------------------------------------------------------

    def evaluate(self, point, target: FieldCtx, param=None):
        R = self.ring
        acc = 0
        for e, c in self.terms.items():
            t = R.specialize(c, param, target) if not isinstance(R, FieldCtx) else embed_field(R, target)(c)
            for u, k in zip(point, e):
                if k:
                    t = target.mul(t, target.pow(u, k))
            acc = target.add(acc, t)
        return acc

    def evaluate_many(self, pts: np.ndarray, target: FieldCtx) -> np.ndarray:
        """Vectorized evaluation for field coefficients; pts has shape (N, n)."""
        emb = embed_field(self.ring, target)
        acc = np.zeros(pts.shape[0], dtype=np.int64)
        pow_cache = {}
        for e, c in self.terms.items():
            t = np.full(pts.shape[0], emb(c), dtype=np.int64)
            for j, k in enumerate(e):
                if k:
                    key = (j, k)
                    if key not in pow_cache:
                        pow_cache[key] = target.vpow(pts[:, j], k)
                    t = target.vmul(t, pow_cache[key])
            acc = target.vadd(acc, t)
        return acc

    # rendering ------------------------------------------------------------------

    def render(self, names=None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.n)]
        if not self.terms:
            return "0"
        R = self.ring
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for j, k in enumerate(e):
                if k == 1:
                    factors.append(names[j])
                elif k:
                    factors.append(f"{names[j]}^{k}")
            mono = "*".join(factors)
            if isinstance(R, FieldCtx):
                cs = R.render(c)
                if R.r > 1:
                    cs = f"[{cs}]"
                is_one = c == 1
            else:
                cs = R.render(c)
                is_one = c == R.one
                if " " in cs or "/" in cs:
                    cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif is_one:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self.render()})"


class PolyMap:
    """An n-tuple of polynomials in n variables; ``F*G`` means F∘G."""

    __slots__ = ("ring", "n", "comps", "_hash")

    def __init__(self, ring, comps):
        comps = tuple(comps)
        n = len(comps)
        for c in comps:
            if c.n != n:
                raise ValueError("component arity does not match the dimension")
        self.ring = ring
        self.n = n
        self.comps = comps
        self._hash = None

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [Poly.var(ring, n, i) for i in range(1, n + 1)])

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.comps)
        return self._hash

    def __getitem__(self, i):
        return self.comps[i]

    def __mul__(self, other: PolyMap) -> PolyMap:
        return compose(self, other)

    def is_identity(self) -> bool:
        return self == PolyMap.identity(self.ring, self.n)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.comps)

    def map_coeffs(self, fn, ring) -> PolyMap:
        return PolyMap(ring, [c.map_coeffs(fn, ring) for c in self.comps])

    def affine_part(self) -> PolyMap:
        R = self.ring
        return PolyMap(R, [Poly(R, self.n, {e: c for e, c in p.terms.items() if sum(e) <= 1}, _clean=True)
                           for p in self.comps])

    def linear_matrix(self):
        """Rows of coefficients of x_1..x_n in each component."""
        rows = []
        for p in self.comps:
            row = []
            for j in range(self.n):
                e = [0] * self.n
                e[j] = 1
                row.append(p.coeff(e))
            rows.append(row)
        return rows

    def constant_vector(self):
        return [p.constant_term() for p in self.comps]

    def render(self, names=None) -> str:
        return "(" + ", ".join(c.render(names) for c in self.comps) + ")"

    def __repr__(self):
        return f"PolyMap{self.render()}"

    def evaluate(self, point, target: FieldCtx | None = None, param=None):
        target = target or self.ring
        return tuple(c.evaluate(point, target, param) for c in self.comps)

    def evaluate_all(self, target: FieldCtx) -> np.ndarray:
        pts = all_points(target, self.n)
        return np.stack([c.evaluate_many(pts, target) for c in self.comps], axis=1)


def compose(F: PolyMap, G: PolyMap) -> PolyMap:
    """F∘G: substitute the components of G into F (G acts first)."""
    if F.n != G.n:
        raise ValueError(f"dimension mismatch: {F.n} vs {G.n}")
    if F.ring != G.ring:
        raise ValueError("maps live over different coefficient rings")
    return PolyMap(F.ring, [c.substitute(G.comps) for c in F.comps])


def evaluate(F: PolyMap, u, target: FieldCtx | None = None, param=None):
    """Image of the point u (element indices of ``target``) under F.

    Parametrized maps need ``param``, the value of Z in ``target``.
    """
    if target is None:
        target = F.ring if isinstance(F.ring, FieldCtx) else F.ring.ctx
    if isinstance(F.ring, FieldCtx):
        if F.ring.p != target.p or target.r % F.ring.r:
            raise FieldError(f"F_{F.ring.q} does not embed in F_{target.q}")
    elif param is None:
        raise ValueError("a parametrized map needs a value for Z")
    return F.evaluate(tuple(u), target, param)


def specialize(F: PolyMap, c: int, target: FieldCtx) -> PolyMap:
    """F_c: substitute Z = c (an element of ``target``); result over ``target``."""
    R = F.ring
    if isinstance(R, FieldCtx):
        return F.map_coeffs(embed_field(R, target), target)
    return F.map_coeffs(lambda a: R.specialize(a, c, target), target)


def shape_predicates(F: PolyMap) -> dict:
    R = F.ring
    n = F.n
    is_affine = all(p.degree <= 1 for p in F.comps)
    triangular = True
    unit_diag = True
    for i, p in enumerate(F.comps, start=1):
        diag = None
        for e, c in p.terms.items():
            if any(e[j] for j in range(i - 1)):
                triangular = False
            elif e[i - 1]:
                if e[i - 1] == 1 and sum(e) == 1:
                    diag = c
                else:
                    triangular = False
        if diag is None:
            triangular = False
        elif diag != R.one:
            unit_diag = False
    fixes_zero = all(R.is_zero(p.constant_term()) for p in F.comps)
    return {
        "is_affine": is_affine,
        "is_triangular": triangular,
        "is_strictly_jonquiere": triangular and unit_diag and fixes_zero,
    }
