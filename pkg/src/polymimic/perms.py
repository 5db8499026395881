"""Induced permutations of (F_Q)^n and a small permutation-group engine.

Points are numbered by the codec in ``fields`` (first coordinate most
significant).  ``Permutation.images[i]`` is the index of the image of point
``i``.  The product ``s * t`` is the composite s∘t (t acts first), matching
the word convention, so ``induced_permutation`` is a homomorphism.
"""

from __future__ import annotations

import functools
import math
from collections import Counter

import numpy as np

from .fields import DEFAULT_BOUND, FieldCtx, all_points, embed_field, extension, points_to_indices
from .maps.poly import PolyMap
from .maps.words import AutWord, E, R, S, T


class PermError(ValueError):
    pass


class Permutation:
    __slots__ = ("images", "_key")

    def __init__(self, images):
        self.images = np.asarray(images, dtype=np.int64)
        self._key = None

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(np.arange(degree, dtype=np.int64))

    @classmethod
    def from_cycles(cls, degree: int, cycles) -> Permutation:
        img = np.arange(degree, dtype=np.int64)
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.images.tobytes()
        return self._key

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other: Permutation) -> Permutation:
        return Permutation(self.images[other.images])

    def inverse(self) -> Permutation:
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree, dtype=np.int64)
        return Permutation(inv)

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        out = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __call__(self, i: int) -> int:
        return int(self.images[i])

    def is_identity(self) -> bool:
        return bool(np.all(self.images == np.arange(self.degree)))

    def cycles(self, include_fixed: bool = False):
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        img = self.images
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = int(img[start])
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = int(img[j])
            if len(cyc) > 1 or include_fixed:
                out.append(cyc)
        return out

    def cycle_type(self) -> dict:
        return dict(sorted(Counter(len(c) for c in self.cycles(include_fixed=True)).items()))

    def render(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation({self.render()})"

    def restrict(self, points) -> np.ndarray:
        return self.images[np.asarray(points, dtype=np.int64)]


def sign(sigma: Permutation) -> int:
    ncycles = len(sigma.cycles(include_fixed=True))
    return -1 if (sigma.degree - ncycles) % 2 else 1


# -- induced permutations ----------------------------------------------------------


def _check_bijective(images: np.ndarray):
    if len(np.unique(images)) != len(images):
        raise PermError("the map is not injective on the point set")


def _coeff_ring_ctx(ring) -> FieldCtx:
    if not isinstance(ring, FieldCtx):
        raise PermError("induced permutations need coefficients in a finite field; specialize first")
    return ring


def map_permutation(F: PolyMap, target: FieldCtx) -> Permutation:
    _coeff_ring_ctx(F.ring)
    vals = F.evaluate_all(target)
    images = points_to_indices(target, vals)
    _check_bijective(images)
    return Permutation(images)


@functools.lru_cache(maxsize=None)
def _grid(target: FieldCtx, n: int):
    pts = all_points(target, n)
    weights = target.q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return pts, weights


def _letter_images(sym, ring, n, target: FieldCtx) -> np.ndarray:
    return _letter_images_cached(sym, ring, n, target)


@functools.lru_cache(maxsize=4096)
def _letter_images_cached(sym, ring, n, target):
    pts, w = _grid(target, n)
    emb = embed_field(ring, target)
    idx = np.arange(target.q ** n, dtype=np.int64)
    if isinstance(sym, R):
        a, b = sym.i - 1, sym.j - 1
        return idx + (pts[:, b] - pts[:, a]) * (w[a] - w[b])
    if isinstance(sym, (T, S, E)):
        k = sym.i - 1
        col = pts[:, k]
        c = emb(sym.c)
        if isinstance(sym, T):
            new = target.vadd(col, np.full_like(col, c))
        elif isinstance(sym, S):
            new = target.vmul(col, np.full_like(col, c))
        else:
            mono = np.full_like(col, c)
            for j, e in enumerate(sym.monomial_exps(n)):
                if e:
                    mono = target.vmul(mono, target.vpow(pts[:, j], e))
            new = target.vadd(col, mono)
        return idx + (new - col) * w[k]
    images = points_to_indices(target, sym.to_map(ring, n).evaluate_all(target))
    _check_bijective(images)
    return images


def word_permutation(w: AutWord, target: FieldCtx) -> Permutation:
    ring = _coeff_ring_ctx(w.ring)
    arr = np.arange(target.q ** w.n, dtype=np.int64)
    for sym in reversed(w.resolved()):
        arr = _letter_images(sym, ring, w.n, target)[arr]
    return Permutation(arr)


def induced_permutation(F, m: int = 1, bound: int = DEFAULT_BOUND) -> Permutation:
    """π_{q^m}(F) for a PolyMap or AutWord over F_q."""
    ctx = _coeff_ring_ctx(F.ring)
    target = extension(ctx, m)
    if target.q ** F.n > bound:
        raise PermError(f"domain of size {target.q}^{F.n} exceeds the bound {bound}")
    if isinstance(F, AutWord):
        return word_permutation(F, target)
    return map_permutation(F, target)


class DomainSlice:
    """Points whose i-th coordinate (1-based) is nonzero."""

    def __init__(self, target: FieldCtx, n: int, i: int):
        self.target, self.n, self.i = target, n, i
        pts, _ = _grid(target, n)
        self.indices = np.nonzero(pts[:, i - 1] != 0)[0]

    def __len__(self):
        return len(self.indices)


# -- Schreier–Sims ---------------------------------------------------------------


class BSGS:
    """Deterministic Schreier–Sims with explicit transversals.

    ``transversals[k]`` maps each point of the k-th basic orbit to a group
    element sending ``base[k]`` there.
    """

    def __init__(self, degree: int, gens):
        self.degree = degree
        self.gens = [g for g in gens if not g.is_identity()]
        self.base = []
        self.levels = []  # strong generators fixing base[:k]
        self.transversals = []
        self._build()

    # construction ----------------------------------------------------------------

    def _orbit(self, k):
        # extends the existing transversal so earlier representatives stay put
        trans = self.transversals[k]
        if not trans:
            trans[self.base[k]] = Permutation.identity(self.degree)
        gens = self.levels[k]
        queue = list(trans)
        for pt in queue:
            for g in gens:
                nxt = int(g.images[pt])
                if nxt not in trans:
                    trans[nxt] = g * trans[pt]
                    queue.append(nxt)

    def _sift(self, g: Permutation, start: int = 0):
        for k in range(start, len(self.base)):
            pt = int(g.images[self.base[k]])
            u = self.transversals[k].get(pt)
            if u is None:
                return g, k
            g = u.inverse() * g
        return g, len(self.base)

    def _add_level(self, moved: Permutation):
        pts = np.nonzero(moved.images != np.arange(self.degree))[0]
        self.base.append(int(pts[0]))
        self.levels.append([])
        self.transversals.append({})

    def _build(self):
        if not self.gens:
            return
        self._add_level(self.gens[0])
        self.levels[0] = list(self.gens)
        self._orbit(0)
        checked = set()
        k = 0
        while k >= 0:
            restart = None
            trans = self.transversals[k]
            for pt in list(trans):
                u = trans[pt]
                for si, s in enumerate(list(self.levels[k])):
                    if (k, pt, si) in checked:
                        continue
                    checked.add((k, pt, si))
                    schreier = trans[int(s.images[pt])].inverse() * s * u
                    if schreier.is_identity():
                        continue
                    h, lvl = self._sift(schreier, k + 1)
                    if h.is_identity():
                        continue
                    if lvl == len(self.base):
                        self._add_level(h)
                    for j in range(k + 1, lvl + 1):
                        self.levels[j].append(h)
                        self._orbit(j)
                    restart = lvl
                    break
                if restart is not None:
                    break
            if restart is None:
                k -= 1
            else:
                k = restart

    # queries -------------------------------------------------------------------------

    @property
    def orbit_sizes(self):
        return [len(t) for t in self.transversals]

    @property
    def order(self) -> int:
        return math.prod(self.orbit_sizes)

    def order_factored(self) -> list:
        return self.orbit_sizes

    def order_primes(self) -> dict:
        out = Counter()
        for s in self.orbit_sizes:
            d = 2
            while d * d <= s:
                while s % d == 0:
                    out[d] += 1
                    s //= d
                d += 1
            if s > 1:
                out[s] += 1
        return dict(sorted(out.items()))

    @property
    def strong_generators(self):
        seen, out = set(), []
        for lvl in self.levels:
            for g in lvl:
                if g.key() not in seen:
                    seen.add(g.key())
                    out.append(g)
        return out

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise PermError("degree mismatch")
        h, _ = self._sift(g)
        return h.is_identity()

    def report(self, extra=None) -> dict:
        out = {"degree": self.degree, "order_factored": self.order_factored(),
               "order_decimal": str(self.order)}
        if extra:
            out.update(extra)
        return out


def bsgs_build(gens, degree: int | None = None) -> BSGS:
    gens = list(gens)
    if degree is None:
        if not gens:
            raise PermError("degree required for an empty generating set")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise PermError("generators of different degrees")
    return BSGS(degree, gens)


def member(B: BSGS, sigma: Permutation) -> bool:
    return B.contains(sigma)


def normal_closure(hgens, ggens, degree: int | None = None) -> BSGS:
    """Smallest subgroup normal in <ggens> containing hgens.

    Deterministic sweep: conjugate every strong generator by every group
    generator, add the conjugates not yet contained, repeat until stable.
    """
    hgens = list(hgens)
    ggens = list(ggens)
    if degree is None:
        degree = (hgens or ggens)[0].degree
    gens = list(hgens)
    B = bsgs_build(gens, degree)
    while True:
        new = []
        for h in B.strong_generators:
            for g in ggens:
                c = g.inverse() * h * g
                if not B.contains(c) and all(c != x for x in new):
                    new.append(c)
        if not new:
            return B
        gens.extend(new)
        B = bsgs_build(gens, degree)


def is_normal_in(H: BSGS, ggens) -> bool:
    return all(H.contains(g.inverse() * h * g) for h in H.strong_generators for g in ggens)


def index(G: BSGS, H: BSGS) -> int:
    for h in H.strong_generators:
        if not G.contains(h):
            raise PermError("H is not a subgroup of G")
    return G.order // H.order


def brute_force_closure(gens, degree: int, limit: int = 50000) -> set:
    """All elements of <gens> by BFS; used as an oracle on small groups."""
    ident = Permutation.identity(degree)
    seen = {ident.key(): ident}
    queue = [ident]
    for x in queue:
        for g in gens:
            y = g * x
            if y.key() not in seen:
                seen[y.key()] = y
                queue.append(y)
                if len(seen) > limit:
                    raise PermError("closure exceeds the limit")
    return set(seen)


def perm_report(sigma: Permutation) -> dict:
    return {"degree": sigma.degree, "sign": sign(sigma), "cycle_type": sigma.cycle_type(),
            "cycles": sigma.render()}
