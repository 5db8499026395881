"""Explicit words in the tame and Derksen groups.

* ``vandermonde_alpha``: scalars α with Σ α_i (Y+i)^{kp+p-1} = Y^l + (lower).
* ``elementary_in_DA_word``: exact words over {T, S, R, ε} for E_{1,α}.
* ``build_tm_word``: the gadget T_m whose induced bijection scales
  (u_1, u_2) by (u_n^{-1}, u_n) wherever u_n != 0.
* ``derksen_mimic_word``: a Derksen word with the same induced bijection as
  E_{1,α} on (F_{q^m})^n.
* ``tame_generators_word``: an exact word for E_{1,v} over affine maps and
  the normalized elementaries E_{1,(k_2 p-1, ..., k_n p-1)}.

All words are fully expanded; no macro letters.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .fields import FieldCtx, all_points, extension, field_create, points_to_indices
from .maps.poly import Poly, PolyMap
from .maps.words import E, R, S, T, AutWord, epsilon, uses_only
from .perms import DomainSlice, induced_permutation
from .rational import ZPoly


class ConstructionError(ValueError):
    pass


# -- small modular helpers ------------------------------------------------------------


def _solve_mod_p(A, b, p):
    """Solve A x = b over F_p for square invertible A (Gauss-Jordan)."""
    n = len(A)
    M = [[A[i][j] % p for j in range(n)] + [b[i] % p] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ConstructionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], -1, p)
        M[col] = [x * inv % p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [(x - f * y) % p for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def _prime_factors(m: int):
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def gcd_shift(a: int, b: int, m: int) -> int:
    """t with gcd(a + t b, m) = gcd(a, b, m), by the product-of-primes rule."""
    d = math.gcd(math.gcd(a, b), m)
    if m == 0 or d == 0:
        return 0
    a1, m1 = a // d, m // d
    t = 1
    for pr in _prime_factors(m1):
        if a1 % pr:
            t *= pr
    return t


def solve_linear_mod(coef: int, rhs: int, M: int) -> int:
    """Smallest k >= 0 with k * coef ≡ rhs (mod M)."""
    if M == 1:
        return 0
    g = math.gcd(coef, M)
    if rhs % g:
        raise ConstructionError(f"{coef} k = {rhs} has no solution mod {M}")
    Mg = M // g
    if Mg == 1:
        return 0
    return (rhs // g) * pow(coef // g, -1, Mg) % Mg


# -- Vandermonde combinations -------------------------------------------------------------------


def vandermonde_alpha(p: int, k: int, l: int) -> list:
    """α ∈ F_p^p with Σ_i α_i (Y+i)^{kp+p-1} = Y^l + P(Y), deg P < kp."""
    if not kp_range_ok(p, k, l):
        raise ConstructionError(f"l={l} outside [{k * p}, {k * p + p})")
    N = k * p + p - 1
    # V[i][j] = binom(N, j) i^j, rows indexed by the shift i
    V = [[math.comb(N, j) * pow(i, j) for j in range(p)] for i in range(p)]
    j = N - l
    # α^T V = e_j  <=>  V^T α = e_j
    Vt = [[V[i][jj] for i in range(p)] for jj in range(p)]
    return _solve_mod_p(Vt, [1 if jj == j else 0 for jj in range(p)], p)


def kp_range_ok(p, k, l) -> bool:
    return k >= 0 and k * p <= l < k * p + p


def vandermonde_residual(p: int, k: int, l: int, alpha) -> ZPoly:
    """Σ α_i (Y+i)^{kp+p-1} - Y^l, computed symbolically over F_p."""
    F = field_create(p, 1)
    N = k * p + p - 1
    acc = ZPoly(F)
    for i, a in enumerate(alpha):
        if a % p:
            acc = acc + (ZPoly(F, (i % p, 1)) ** N).scale(a % p)
    return acc - ZPoly(F, [0] * l + [1])


def vandermonde_check(p: int, k: int, l: int, alpha=None) -> bool:
    if alpha is None:
        alpha = vandermonde_alpha(p, k, l)
    return vandermonde_residual(p, k, l, alpha).degree < k * p


# -- exponent pairs --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentPair:
    a: int
    b: int
    M: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.M)
        object.__setattr__(self, "b", self.b % self.M)

    def rho(self) -> ExponentPair:
        return ExponentPair(self.a, self.b + self.a + 1, self.M)

    def tau(self) -> ExponentPair:
        return ExponentPair(self.b, self.a, self.M)

    def stratum(self) -> int:
        return math.gcd(math.gcd(self.a + 1, self.b + 1), self.M)


def replay(seq, start: ExponentPair) -> ExponentPair:
    cur = start
    for op in seq:
        cur = cur.rho() if op == "rho" else cur.tau()
    return cur


def _reach_plan(a: int, b: int, s: int, M: int):
    """(k1, k2, t) so that ρ^k1, τ, ρ^k2, τ, ρ^(M-t), τ sends (s, s) to (a, b)."""
    t = gcd_shift(a + 1, b + 1, M)
    A = a + t * (b + 1)
    k1 = solve_linear_mod(s + 1, A - s, M)
    k2 = solve_linear_mod(A + 1, b - s, M)
    return k1, k2, t % M if M > 1 else 0


def exponent_reach_word(target: ExponentPair, start: ExponentPair) -> list:
    """Sequence over {"rho", "tau"} (application order) taking start to target.

    Valid when start = (s, s) and both pairs lie in the same stratum
    gcd(a+1, b+1, M).
    """
    M = target.M
    if start.M != M:
        raise ConstructionError("pairs have different moduli")
    if start.a != start.b:
        raise ConstructionError("start must be a diagonal pair (s, s)")
    if target == start:
        return []
    d = target.stratum()
    if math.gcd(start.a + 1, M) != d:
        raise ConstructionError(
            f"start stratum {math.gcd(start.a + 1, M)} differs from target stratum {d}")
    k1, k2, t = _reach_plan(target.a, target.b, start.a, M)
    seq = ["rho"] * k1 + ["tau"] + ["rho"] * k2 + ["tau"] + ["rho"] * ((M - t) % M) + ["tau"]
    if replay(seq, start) != target:  # pragma: no cover - guarded by tests
        raise ConstructionError("exponent plan failed its replay check")
    return seq


# -- exact DA words for elementaries -------------------------------------------------------


def _w(ctx, n, letters) -> AutWord:
    return AutWord(ctx, n, letters)


def _scaled(word: AutWord, c: int) -> AutWord:
    """S_{1,c} ∘ word ∘ S_{1,c^{-1}}: multiplies the added term by c."""
    ctx = word.ring
    if c == 1:
        return word
    return _w(ctx, word.n, [S(1, c)]) * word * _w(ctx, word.n, [S(1, ctx.inv(c))])


def _conj(word: AutWord, letters) -> AutWord:
    """L ∘ word ∘ L^{-1} for a list of self-describing letters L."""
    L = _w(word.ring, word.n, letters)
    return L * word * L.inverse()


def _swap(word: AutWord, i: int, j: int) -> AutWord:
    if i == j:
        return word
    return _conj(word, [R(i, j)])


@functools.lru_cache(maxsize=None)
def _small_exponent_word(alpha: tuple, n: int, ctx: FieldCtx) -> AutWord:
    """E_{1,α} for α ∈ {0..p-1}^{n-1}, built slot by slot from ε."""
    p = ctx.p
    if all(a == 0 for a in alpha):
        return _w(ctx, n, [T(1, 1)])
    word = _w(ctx, n, [epsilon(ctx, n)])
    for j in range(2, n + 1):
        l = alpha[j - 2]
        if l == p - 1:
            continue
        beta = vandermonde_alpha(p, 0, l)
        acc = _w(ctx, n, [])
        for t, b in enumerate(beta):
            if b % p == 0:
                continue
            shifted = word if t == 0 else _conj(word, [T(j, ctx.neg(ctx.from_int(t)))])
            acc = acc * _scaled(shifted, ctx.from_int(b))
        word = acc
    return word


def _commutator(g: AutWord, h: AutWord) -> AutWord:
    return g.inverse() * h.inverse() * g * h


@functools.lru_cache(maxsize=None)
def _zero_slot_word(alpha: tuple, n: int, ctx: FieldCtx) -> AutWord:
    p = ctx.p
    if all(a <= p - 1 for a in alpha):
        return _small_exponent_word(alpha, n, ctx)
    j = alpha.index(0) + 2
    if j != 2:
        sw = list(alpha)
        sw[0], sw[j - 2] = sw[j - 2], sw[0]
        return _swap(_zero_slot_word(tuple(sw), n, ctx), 2, j)
    # α = (0, α_3, ..., α_n): commutator of E_{1,(1,γ)} and E_{2,(0,δ)}
    gamma = tuple(min(a, p - 1) for a in alpha[1:])
    delta = tuple(a - g for a, g in zip(alpha[1:], gamma))
    g = _small_exponent_word((1,) + gamma, n, ctx)
    h = _swap(_zero_slot_word((0,) + delta, n, ctx), 1, 2)
    return _commutator(g, h)


@functools.lru_cache(maxsize=None)
def _low_first_word(alpha: tuple, n: int, ctx: FieldCtx) -> AutWord:
    """E_{1,α} with α_2 <= p-2, α_4.. <= p-1 and α_3 arbitrary (p odd).

    [E_{1,(a+1,γ,…)}, E_{2,(0,δ,0…)}] adds ((Y+Z^δ)^{a+1} - Y^{a+1}) Z^γ…,
    whose top Y-term is (a+1) Y^a Z^{γ+δ}; the lower terms are peeled off
    recursively (the Y^0 term has a zero slot).
    """
    p = ctx.p
    if 0 in alpha or all(x <= p - 1 for x in alpha):
        return elementary_in_DA_word(alpha, n, ctx)
    a, k, rest = alpha[0], alpha[1], alpha[2:]
    gamma = min(k, p - 1)
    delta = k - gamma
    g = _small_exponent_word((a + 1, gamma) + rest, n, ctx)
    h = _swap(_zero_slot_word((0, delta) + (0,) * len(rest), n, ctx), 1, 2)
    word = _commutator(g, h)
    for i in range(a):
        c = math.comb(a + 1, i) % p
        if c:
            lower = (i, delta * (a + 1 - i) + gamma) + rest
            word = word * _scaled(_low_first_word(lower, n, ctx), ctx.neg(ctx.from_int(c)))
    return _scaled(word, ctx.inv(ctx.from_int(a + 1)))


def elementary_in_DA_word(alpha, n: int, ctx: FieldCtx, c: int = 1) -> AutWord:
    """Exact word over {T, S, R, ε} composing to E_{1,α} (scaled by c).

    Supported: α ∈ {0..p-1}^{n-1}; α with a zero entry (any sizes); and,
    for odd p, α_2 <= p-2 with α_4, ..., α_n <= p-1.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n - 1:
        raise ConstructionError(f"α needs {n - 1} entries")
    if any(a < 0 for a in alpha):
        raise ConstructionError("negative exponent")
    p = ctx.p
    if c == 0:
        raise ConstructionError("scale must be nonzero")
    if all(a <= p - 1 for a in alpha):
        word = _small_exponent_word(alpha, n, ctx)
    elif 0 in alpha:
        word = _zero_slot_word(alpha, n, ctx)
    elif n >= 3 and alpha[0] <= p - 2 and all(a <= p - 1 for a in alpha[2:]):
        word = _low_first_word(alpha, n, ctx)
    else:
        raise ConstructionError(f"no exact Derksen word for E_1,{alpha} is implemented")
    return _scaled(word, c)


# -- the T_m gadget ----------------------------------------------------------------------------


def _e(n, *pairs):
    """Exponent vector of length n-1 with given (coordinate, exponent) pairs."""
    v = [0] * (n - 1)
    for coord, e in pairs:
        v[coord - 2] = e
    return tuple(v)


def char2_exponent(ctx: FieldCtx, m: int) -> int:
    """k_m = 2^{2e-1}, e = r m the degree of F_{q^m} over F_2."""
    e = ctx.r * m
    return 2 ** (2 * e - 1)


@functools.lru_cache(maxsize=None)
def build_tm_word(ctx: FieldCtx, n: int, m: int = 1) -> AutWord:
    if n < 3:
        raise ConstructionError("T_m needs n >= 3")
    Q = ctx.q ** m
    G = elementary_in_DA_word(_e(n, (2, 1)), n, ctx)
    H = _w(ctx, n, [R(1, 2)])
    minus1 = ctx.neg(1)
    if ctx.p != 2:
        A_m = elementary_in_DA_word(_e(n, (2, 1), (n, Q - 2)), n, ctx)
        Sm = _w(ctx, n, [S(1, minus1)])
        B = G * Sm * elementary_in_DA_word(_e(n, (2, 1), (n, 1)), n, ctx) * Sm
        C_m = G * Sm * A_m * Sm
        return A_m * H * B * H * G.inverse() * H * C_m * H
    A_ = elementary_in_DA_word(_e(n, (2, 1), (n, 1)), n, ctx)
    F = H * G
    B_m = (A_ * H) ** char2_exponent(ctx, m)
    return (F * B_m * F) ** 2


def b1_word(ctx: FieldCtx, n: int) -> AutWord:
    """(AH)^2 with A = E_{1,(1,0,…,0,1)}, H = R_{1,2} (characteristic 2)."""
    A_ = elementary_in_DA_word(_e(n, (2, 1), (n, 1)), n, ctx)
    return (A_ * _w(ctx, n, [R(1, 2)])) ** 2


def b1_closed_form(ctx: FieldCtx, n: int) -> PolyMap:
    X = [Poly.var(ctx, n, i) for i in range(1, n + 1)]
    x1, x2, xn = X[0], X[1], X[n - 1]
    return PolyMap(ctx, [x1 + x1 * xn ** 2 + x2 * xn, x1 * xn + x2] + X[2:])


def tm_closed_form(ctx: FieldCtx, n: int, m: int = 1) -> PolyMap:
    """(2X1Xn^{Q-2} - X1Xn^{2Q-3} + X2Xn^{Q-1} - X2, X1 - X1Xn^{Q-1} + X2Xn, X3, …)."""
    Q = ctx.q ** m
    X = [Poly.var(ctx, n, i) for i in range(1, n + 1)]
    x1, x2, xn = X[0], X[1], X[n - 1]
    two = Poly.const(ctx, n, ctx.from_int(2))
    c1 = two * x1 * xn ** (Q - 2) - x1 * xn ** (2 * Q - 3) + x2 * xn ** (Q - 1) - x2
    c2 = x1 - x1 * xn ** (Q - 1) + x2 * xn
    return PolyMap(ctx, [c1, c2] + X[2:])


def psi_images(target: FieldCtx, n: int, i: int = None) -> tuple:
    """(indices of the punctured set u_i != 0, images under ψ_i)."""
    i = n if i is None else i
    pts = all_points(target, n)
    sl = DomainSlice(target, n, i)
    sub = pts[sl.indices].copy()
    ui = sub[:, i - 1]
    inv = target.vpow(ui, target.q - 2)
    sub[:, 0] = target.vmul(sub[:, 0], inv)
    sub[:, 1] = target.vmul(sub[:, 1], ui)
    return sl.indices, points_to_indices(target, sub)


def tm_psi_check(ctx: FieldCtx, n: int, m: int = 1, word: AutWord | None = None) -> bool:
    word = word or build_tm_word(ctx, n, m)
    perm = induced_permutation(word, m)
    idx, img = psi_images(extension(ctx, m), n)
    return bool(np.array_equal(perm.images[idx], img))


def tm_conjugate(alpha_word: AutWord, tm: AutWord) -> AutWord:
    """tm^{-1} ∘ alpha_word ∘ tm."""
    return tm.inverse() * alpha_word * tm


def char2_power_identities(m: int) -> dict:
    """u^{2^{2m}} = u and h_m(u) = u^{2^{2m-1}-1} on F_{2^m}^*."""
    F = field_create(2, m)
    k = 2 ** (2 * m - 1)
    first = all(F.pow(u, 2 ** (2 * m)) == u for u in range(1, F.q))
    second = True
    for u in range(1, F.q):
        h = 0
        for j in range(1, 2 * m):
            h = F.add(h, F.pow(u, k - 2 ** j))
        if h != F.pow(u, k - 1):
            second = False
    return {"m": m, "frobenius": first, "h_m": second}


# -- Derksen mimicking ------------------------------------------------------------------------


class _DerksenBuilder:
    """Words over {T, S, R, ε} inducing π_{q^m}(E_{1,α}).

    Exponents are kept as integers in [1, M] (M = q^m - 1), which is exact on
    (F_{q^m})^n as long as no exponent is 0; exponent 0 (the constant 1) is
    handled by the exact zero-slot words instead.
    """

    def __init__(self, ctx: FieldCtx, n: int, m: int):
        self.ctx, self.n, self.m = ctx, n, m
        self.M = ctx.q ** m - 1
        self.p = ctx.p
        self.tm = build_tm_word(ctx, n, m)
        self._cache = {}
        self._tmi = {}

    def norm(self, e: int) -> int:
        return (e - 1) % self.M + 1

    def t_mi(self, i: int) -> AutWord:
        """R_{i,n} T_m R_{i,n}: scales coordinates 1, 2 by u_i^{-1}, u_i."""
        if i not in self._tmi:
            self._tmi[i] = _swap(self.tm, i, self.n)
        return self._tmi[i]

    def rho(self, word: AutWord, i: int, k: int) -> AutWord:
        """k-fold conjugation by T_{m,i}: adds k(α_2 + 1) to α_i."""
        if k == 0:
            return word
        t = self.t_mi(i) ** k
        return t.inverse() * word * t

    def tau(self, word: AutWord) -> AutWord:
        return _swap(word, 2, 3)

    def exact(self, alpha: tuple) -> AutWord:
        return elementary_in_DA_word(alpha, self.n, self.ctx)

    def base(self, spect: tuple) -> AutWord:
        """Word for (p-1, p-1, spect)."""
        key = ("base", spect)
        if key in self._cache:
            return self._cache[key]
        p, M = self.p, self.M
        word = _w(self.ctx, self.n, [epsilon(self.ctx, self.n)])
        for idx, target in enumerate(spect):
            i = idx + 4
            k = solve_linear_mod(p, target - (p - 1), M)
            word = self.rho(word, i, k)
        self._cache[key] = word
        return word

    def reach(self, a: int, b: int, spect: tuple) -> AutWord:
        a, b = self.norm(a), self.norm(b)
        key = (a, b, spect)
        if key in self._cache:
            return self._cache[key]
        p, M = self.p, self.M
        if a == p - 1 and b == p - 1 or M == 1:
            word = self.base(spect)
        else:
            d = math.gcd(math.gcd(a + 1, b + 1), M)
            if d == 1:
                s, start = p - 1, self.base(spect)
            else:
                s, start = d - 1, self.diagonal(d, spect)
            if (a, b) == (s, s):
                word = start
            else:
                k1, k2, t = _reach_plan(a, b, s, M)
                word = self.rho(start, 3, k1)
                word = self.tau(word)
                word = self.rho(word, 3, k2)
                word = self.tau(word)
                word = self.rho(word, 3, (M - t) % M)
                word = self.tau(word)
        self._cache[key] = word
        return word

    def diagonal(self, d: int, spect: tuple) -> AutWord:
        """Word for (d-1, d-1, spect), d > 1 a divisor of M."""
        key = ("diag", d, spect)
        if key in self._cache:
            return self._cache[key]
        ctx, n, p = self.ctx, self.n, self.p
        w1 = self.reach(d - 1, d, spect)  # stratum gcd(d, d+1, M) = 1
        minus1 = ctx.neg(1)
        # X + Y^{d-1} (Z+1)^d  and  X - Y^{d-1} Z^d
        shifted = _conj(w1, [T(3, minus1)])
        negated = _scaled(w1, minus1)
        word = shifted * negated
        for i in range(d - 1):
            c = math.comb(d, i) % p
            if not c:
                continue
            if i == 0:
                piece = self.exact((d - 1, 0) + spect)
            else:
                piece = self.reach(d - 1, i, spect)
            word = word * _scaled(piece, ctx.neg(ctx.from_int(c)))
        # left with d Y^{d-1} Z^{d-1}; p does not divide d since d | q^m - 1
        word = _scaled(word, ctx.inv(ctx.from_int(d)))
        self._cache[key] = word
        return word

    def word(self, alpha: tuple) -> AutWord:
        if 0 in alpha:
            return self.exact(alpha)
        if all(a == self.p - 1 for a in alpha):
            return _w(self.ctx, self.n, [epsilon(self.ctx, self.n)])
        spect = tuple(self.norm(a) for a in alpha[2:])
        return self.reach(alpha[0], alpha[1], spect)


@functools.lru_cache(maxsize=None)
def _derksen_builder(ctx, n, m):
    return _DerksenBuilder(ctx, n, m)


def derksen_mimic_word(alpha, n: int, ctx: FieldCtx, m: int = 1) -> AutWord:
    """Word over {T, S, R, ε} with π_{q^m}(word) = π_{q^m}(E_{1,α})."""
    if n < 3:
        raise ConstructionError("the Derksen construction needs n >= 3")
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n - 1 or any(a < 0 for a in alpha):
        raise ConstructionError(f"α must be a nonnegative vector of length {n - 1}")
    return _derksen_builder(ctx, n, m).word(alpha)


# -- the tame generating set -----------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def tame_generators_word(v: tuple, n: int, ctx: FieldCtx) -> AutWord:
    """Exact word for E_{1,v} over Aff_n and E_{1,(k_2p-1,…,k_np-1)}, k sorted."""
    v = tuple(int(x) for x in v)
    if len(v) != n - 1 or any(x < 0 for x in v):
        raise ConstructionError(f"v must be a nonnegative vector of length {n - 1}")
    p = ctx.p
    bad = [i for i, x in enumerate(v) if x % p != p - 1]
    if not bad:
        for i in range(len(v) - 1):
            if v[i] > v[i + 1]:
                sw = list(v)
                sw[i], sw[i + 1] = sw[i + 1], sw[i]
                return _swap(tame_generators_word(tuple(sw), n, ctx), i + 2, i + 3)
        return _w(ctx, n, [E(1, v, 1)])
    idx = bad[-1]
    j = idx + 2
    l = v[idx]
    k = l // p  # (k) p <= l < (k+1) p
    w = list(v)
    w[idx] = k * p + p - 1
    inner = tame_generators_word(tuple(w), n, ctx)
    alpha = vandermonde_alpha(p, k, l)
    word = _w(ctx, n, [])
    for t, a in enumerate(alpha):
        if a % p == 0:
            continue
        shifted = inner if t == 0 else _conj(inner, [T(j, ctx.neg(ctx.from_int(t)))])
        word = word * _scaled(shifted, ctx.from_int(a))
    # subtract the lower-order tail P(X_j)
    P = vandermonde_residual(p, k, l, alpha)
    for e, c in enumerate(P.coeffs):
        if c:
            lower = list(v)
            lower[idx] = e
            word = word * _scaled(tame_generators_word(tuple(lower), n, ctx), ctx.neg(ctx.from_int(c)))
    return word


def is_tame_generator_letter(sym, p: int) -> bool:
    return (sym.kind == "E" and sym.i == 1 and sym.c == 1
            and all(a % p == p - 1 for a in sym.alpha)
            and list(sym.alpha) == sorted(sym.alpha))


def uses_tame_generators(w: AutWord) -> bool:
    p = w.ring.p
    return all(s.kind in ("T", "S", "R", "A") or is_tame_generator_letter(s, p) for s, _ in w.letters)


def uses_derksen_generators(w: AutWord) -> bool:
    return uses_only(w, "DA")
