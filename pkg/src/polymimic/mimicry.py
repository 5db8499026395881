"""Mimicking automorphisms that fix a variable.

A map over F_q[Z] is the same thing as an automorphism of (F_q)^{n+1} fixing
the last coordinate; its specialization at Z = c is written F_c.  The
pipeline in ``mimic_fixed_variable`` produces a word T with polynomial
coefficients in Z such that T_c = F_c for every c in F_{q^m}:

1. split off the affine part A(Z) of F (unimodular over F_q[Z]);
2. normalize the remaining word over F_q(Z) into strictly Jonquière maps and
   coordinate swaps, and collect the radical g of its denominators;
3. replace g^{-t} by g^{t(Q-2)} (Q = q^m) to get G, correct off V(g);
4. on V(g), one gadget per irreducible factor g_i with a root in F_Q,
   built from I + (1 - g_i^{Q-1}) f(Z, X).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fields import FieldCtx, embed_field, extension
from .maps.poly import Poly, PolyMap, compose, specialize
from .maps.words import A, E, J, R, S, T, AutWord, word_to_map
from .rational import RatFunc, ZPoly, ratfunc_field, squarefree_part, zgcd, zpoly_ring


class MimicError(ValueError):
    pass


# -- helpers ---------------------------------------------------------------------------------


def _ring_ctx(ring) -> FieldCtx:
    return ring if isinstance(ring, FieldCtx) else ring.ctx


def _var(ring, n, i):
    return Poly.var(ring, n, i)


def _shear(ring, n, i, j, c) -> J:
    """x_i -> x_i + c x_j (i < j) as a strictly Jonquière letter."""
    tails = [Poly.zero(ring, n) for _ in range(n)]
    tails[i - 1] = _var(ring, n, j).scale(c)
    return J((ring.one,) * n, tuple(tails))


def _strict_from_tails(ring, n, tails) -> J:
    return J((ring.one,) * n, tuple(tails))


def _is_trivial_J(sym: J, ring) -> bool:
    return all(d == ring.one for d in sym.diag) and all(t.is_zero() for t in sym.tails)


def is_normalized(w: AutWord) -> bool:
    """Every letter is a strictly Jonquière J or a swap R."""
    for s, e in w.letters:
        if s.kind == "R":
            continue
        if s.kind != "J" or not s.is_strict(w.ring):
            return False
    return True


# -- word normalization ------------------------------------------------------------------------


class _Aff:
    """x -> D x + v with D diagonal."""

    def __init__(self, ring, diag, vec):
        self.ring = ring
        self.diag = list(diag)
        self.vec = list(vec)

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [ring.one] * n, [ring.zero] * n)

    def then_after(self, other: _Aff) -> _Aff:
        """self ∘ other."""
        r = self.ring
        d = [r.mul(a, b) for a, b in zip(self.diag, other.diag)]
        v = [r.add(r.mul(a, w), u) for a, w, u in zip(self.diag, other.vec, self.vec)]
        return _Aff(r, d, v)


def _lu_atoms(ring, n, M, v):
    """Atoms (left to right) for x -> M x + v over a field."""
    work = [list(r) for r in M]
    swaps = []
    L = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((r for r in range(k, n) if not ring.is_zero(work[r][k])), None)
        if piv is None:
            raise MimicError("singular affine letter")
        if piv != k:
            work[k], work[piv] = work[piv], work[k]
            for j in range(k):
                L[k][j], L[piv][j] = L[piv][j], L[k][j]
            swaps.append((k + 1, piv + 1))
        for r in range(k + 1, n):
            if not ring.is_zero(work[r][k]):
                f = ring.div(work[r][k], work[k][k])
                L[r][k] = f
                work[r] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(work[r], work[k])]
    atoms = [_Aff(ring, [ring.one] * n, v)]
    # P M = L U, so M = P^{-1} L U and P^{-1} = s_1 s_2 ... s_t
    atoms += [R(i, j) for i, j in swaps]
    rev = [R(i + 1, n - i) for i in range(n // 2)]
    upper_of_L = []
    for i in range(n):
        for j in range(i + 1, n):
            # w0 L w0 is unit upper triangular
            c = L[n - 1 - i][n - 1 - j]
            if not ring.is_zero(c):
                upper_of_L.append((i + 1, j + 1, c))
    if upper_of_L:
        atoms += rev + [_linear_unipotent(ring, n, upper_of_L)] + rev
    diag = [work[i][i] for i in range(n)]
    atoms.append(_Aff(ring, diag, [ring.zero] * n))
    ups = []
    for i in range(n):
        for j in range(i + 1, n):
            if not ring.is_zero(work[i][j]):
                ups.append((i + 1, j + 1, ring.div(work[i][j], diag[i])))
    if ups:
        atoms.append(_linear_unipotent(ring, n, ups))
    return atoms


def _linear_unipotent(ring, n, entries) -> J:
    tails = [Poly.zero(ring, n) for _ in range(n)]
    for i, j, c in entries:
        tails[i - 1] = tails[i - 1] + _var(ring, n, j).scale(c)
    return _strict_from_tails(ring, n, tails)


def _triangular_atoms(ring, n, sym: J):
    """J = (translation ∘ diagonal) ∘ strict."""
    consts = [t.coeff((0,) * n) for t in sym.tails]
    tails = []
    for k, t in enumerate(sym.tails):
        rest = t - Poly.const(ring, n, consts[k])
        tails.append(rest.scale(ring.inv(sym.diag[k])))
    return [_Aff(ring, sym.diag, consts), _strict_from_tails(ring, n, tails)]


def _atoms(sym, ring, n):
    if isinstance(sym, T):
        v = [ring.zero] * n
        v[sym.i - 1] = sym.c
        return [_Aff(ring, [ring.one] * n, v)]
    if isinstance(sym, S):
        d = [ring.one] * n
        d[sym.i - 1] = sym.c
        return [_Aff(ring, d, [ring.zero] * n)]
    if isinstance(sym, R):
        return [] if sym.i == sym.j else [sym]
    if isinstance(sym, E):
        if sym.i == 1:
            return _triangular_atoms(ring, n, J.from_map(sym.to_map(ring, n)))
        sw = R(1, sym.i)
        M = sw.to_map(ring, n)
        inner = compose(compose(M, sym.to_map(ring, n)), M)
        return [sw] + _triangular_atoms(ring, n, J.from_map(inner)) + [sw]
    if isinstance(sym, J):
        return _triangular_atoms(ring, n, sym)
    if isinstance(sym, A):
        return _lu_atoms(ring, n, sym.matrix, sym.vector)
    raise MimicError(f"cannot normalize letter {sym!r}")


def _push_through(sym, aff: _Aff, ring, n):
    """sym ∘ aff = aff' ∘ sym' with sym' of the same shape."""
    if isinstance(sym, R):
        d, v = list(aff.diag), list(aff.vec)
        i, j = sym.i - 1, sym.j - 1
        d[i], d[j] = d[j], d[i]
        v[i], v[j] = v[j], v[i]
        return _Aff(ring, d, v), sym
    # strict J: J(Dx + v) = J(v) + D J'(x)
    subs = [_var(ring, n, k + 1).scale(aff.diag[k]) + Poly.const(ring, n, aff.vec[k]) for k in range(n)]
    vpt = [Poly.const(ring, n, c) for c in aff.vec]
    new_tails, new_vec = [], []
    for k, t in enumerate(sym.tails):
        at_v = t.substitute(vpt).constant_term() if not t.is_zero() else ring.zero
        shifted = t.substitute(subs) - Poly.const(ring, n, at_v)
        new_tails.append(shifted.scale(ring.inv(aff.diag[k])))
        new_vec.append(ring.add(aff.vec[k], at_v))
    return _Aff(ring, aff.diag, new_vec), _strict_from_tails(ring, n, new_tails)


def diag_block_letters(ring, n, i, j, f):
    """diag(f^{-1}, f) on coordinates (i, j), i < j, as eight letters.

    U(f^{-1}) R U(1-f) R U(-1) R U(1-f^{-1}) alone is the anti-diagonal
    [[0, f^{-1}], [f, 0]]; a final swap R makes it diagonal.
    U(c) is x_i -> x_i + c x_j.
    """
    fi = ring.inv(f)
    one = ring.one
    Rij = R(i, j)
    return [_shear(ring, n, i, j, fi), Rij, _shear(ring, n, i, j, ring.sub(one, f)), Rij,
            _shear(ring, n, i, j, ring.neg(one)), Rij, _shear(ring, n, i, j, ring.sub(one, fi)), Rij]


def sign_flip_letters(ring, n, i, j):
    """diag(1, -1) on coordinates (i, j): R U(-1) R U(1) R U(-1).

    R diag(1,-1) is the rotation [[0,-1],[1,0]] = U(-1) (R U(1) R) U(-1).
    """
    one = ring.one
    Rij = R(i, j)
    return [Rij, _shear(ring, n, i, j, ring.neg(one)), Rij, _shear(ring, n, i, j, one), Rij,
            _shear(ring, n, i, j, ring.neg(one))]


def _diag_letters(ring, n, diag):
    """Letters for a diagonal map of determinant ±1."""
    d = list(diag)
    out = []
    for i in range(n - 1):
        if d[i] != ring.one:
            # diag(d_i, d_i^{-1}) on (i, i+1), leaving d_{i+1} d_i behind
            out += diag_block_letters(ring, n, i + 1, i + 2, ring.inv(d[i]))
            d[i + 1] = ring.mul(d[i + 1], d[i])
            d[i] = ring.one
    last = d[n - 1]
    if last == ring.one:
        return out
    if last == ring.neg(ring.one) and n >= 2:
        return out + sign_flip_letters(ring, n, n - 1, n)
    raise MimicError("diagonal part has determinant other than ±1")


def normalize_word(w: AutWord, allow_affine: bool = False) -> AutWord:
    """Rewrite w as strictly Jonquière letters and swaps (same composite).

    The composite must fix the origin and its linear part must have
    determinant ±1, since those are exactly the maps such letters can
    produce.  With ``allow_affine`` a leading translation is kept as T
    letters instead.
    """
    ring, n = w.ring, w.n
    if not allow_affine:
        origin = word_to_map(w).affine_part()
        if any(not ring.is_zero(c.coeff((0,) * n)) for c in origin.comps):
            raise MimicError("the word's affine part has a translation")
    atoms = []
    for sym in w.resolved():
        atoms += _atoms(sym, ring, n)
    aff = _Aff.identity(ring, n)
    out = []
    for a in reversed(atoms):
        if isinstance(a, _Aff):
            aff = a.then_after(aff)
        else:
            aff, a2 = _push_through(a, aff, ring, n)
            if not (isinstance(a2, J) and _is_trivial_J(a2, ring)):
                out.append(a2)
    out.reverse()
    shifts = [T(i + 1, c) for i, c in enumerate(aff.vec) if not ring.is_zero(c)]
    if shifts and not allow_affine:  # pragma: no cover - excluded by the affine check
        raise MimicError("leftover translation")
    return AutWord(ring, n, shifts + _diag_letters(ring, n, aff.diag) + out)


# -- Jung–van der Kulk in dimension two -------------------------------------------------------


def _partial(p: Poly, i: int) -> Poly:
    R_ = p.ring
    out = {}
    for e, c in p.terms.items():
        k = e[i - 1]
        if k:
            ne = list(e)
            ne[i - 1] -= 1
            out[tuple(ne)] = R_.mul(R_.from_int(k), c)
    return Poly(R_, p.n, out)


def jacobian_determinant(F: PolyMap) -> Poly:
    f1, f2 = F.comps
    return _partial(f1, 1) * _partial(f2, 2) - _partial(f1, 2) * _partial(f2, 1)


def _leading_ratio(h_big: Poly, h_small: Poly, k: int):
    """c with h_big = c * h_small^k, or None."""
    pw = h_small ** k
    if pw.is_zero():
        return None
    e0, c0 = pw.sorted_terms()[0]
    c = h_big.ring.div(h_big.coeff(e0), c0)
    if h_big == pw.scale(c):
        return c
    return None


def jvdk_decompose_dim2(F: PolyMap) -> AutWord:
    """Affine and triangular letters composing to F (n = 2, field coefficients)."""
    if F.n != 2:
        raise MimicError("Jung–van der Kulk decomposition is implemented for n = 2")
    ring = F.ring
    jac = jacobian_determinant(F)
    if jac.degree != 0:
        raise MimicError("Jacobian determinant is not a nonzero constant")
    letters = []
    cur = F
    while cur.degree > 1:
        f1, f2 = cur.comps
        d1, d2 = f1.degree, f2.degree
        done = False
        if d1 >= d2 and d2 >= 1 and d1 % d2 == 0:
            c = _leading_ratio(f1.homogeneous_part(d1), f2.homogeneous_part(d2), d1 // d2)
            if c is not None:
                # cur = (X + c Y^k, Y) ∘ (f1 - c f2^k, f2)
                letters.append(E(1, (d1 // d2,), c))
                cur = PolyMap(ring, [f1 - (f2 ** (d1 // d2)).scale(c), f2])
                done = True
        if not done and d2 > d1 and d1 >= 1 and d2 % d1 == 0:
            c = _leading_ratio(f2.homogeneous_part(d2), f1.homogeneous_part(d1), d2 // d1)
            if c is not None:
                letters.append(E(2, (d2 // d1,), c))
                cur = PolyMap(ring, [f1, f2 - (f1 ** (d2 // d1)).scale(c)])
                done = True
        if not done:
            raise MimicError("no leading-form cancellation possible: not an automorphism")
    letters.append(A.from_map(cur))
    return AutWord(ring, 2, letters)


# -- the Nagata family ---------------------------------------------------------------------------


def nagata_family(f: ZPoly, g: ZPoly, ctx: FieldCtx | None = None):
    """(map over F_q[Z], word over F_q(Z)) for Δ = gX + fY² and
    F = (X - 2fYΔ - fgΔ², Y + gΔ)."""
    ctx = ctx or g.ctx
    if g.is_zero():
        raise MimicError("g must be nonzero")
    PR = zpoly_ring(ctx)
    X, Y = _var(PR, 2, 1), _var(PR, 2, 2)
    fc, gc = Poly.const(PR, 2, f), Poly.const(PR, 2, g)
    two = Poly.const(PR, 2, PR.from_int(2))
    delta = gc * X + fc * Y * Y
    Fmap = PolyMap(PR, [X - two * fc * Y * delta - fc * gc * delta * delta, Y + gc * delta])
    K = ratfunc_field(ctx)
    fg = RatFunc(f, g)
    Yk = _var(K, 2, 2)
    zero = Poly.zero(K, 2)

    def strict(tail):
        return J((K.one, K.one), (tail, zero))

    g2 = RatFunc(g * g)
    letters = [strict((Yk * Yk).scale(K.neg(fg))), R(1, 2), strict(Yk.scale(g2)), R(1, 2),
               strict((Yk * Yk).scale(fg))]
    letters = [s for s in letters if not (isinstance(s, J) and _is_trivial_J(s, K))]
    return Fmap, AutWord(K, 2, letters)


def to_ratfunc_map(F: PolyMap) -> PolyMap:
    K = ratfunc_field(_ring_ctx(F.ring))
    return F.map_coeffs(lambda a: RatFunc(a) if isinstance(a, ZPoly) else K.from_base(a), K)


def to_ratfunc_word(w: AutWord) -> AutWord:
    ctx = _ring_ctx(w.ring)
    K = ratfunc_field(ctx)
    if w.ring == K:
        return w
    if isinstance(w.ring, FieldCtx):
        return w.map_coeffs(K.from_base, K)
    return w.map_coeffs(RatFunc, K)


# -- open and closed set mimicking ------------------------------------------------------------------


def denominator_radical(w: AutWord) -> ZPoly:
    ctx = _ring_ctx(w.ring)
    g = ZPoly.const(ctx, 1)

    def collect(c):
        nonlocal g
        if isinstance(c, RatFunc) and c.den.degree > 0:
            g = (g * c.den) // zgcd(g, c.den)

    for s, _ in w.letters:
        if isinstance(s, J):
            for d in s.diag:
                collect(d)
            for t in s.tails:
                for c in t.terms.values():
                    collect(c)
        elif isinstance(s, (T, S, E)):
            collect(s.c)
        elif isinstance(s, A):
            for r in s.matrix:
                for c in r:
                    collect(c)
            for c in s.vector:
                collect(c)
    return squarefree_part(g)


def power_replacement(c: RatFunc, g: ZPoly, Q: int) -> ZPoly:
    """a/den with den | g^t  ->  a (g^t/den) g^{t(Q-2)}."""
    if c.den.degree <= 0:  # denominators are kept monic
        return c.num
    t, gt = 0, ZPoly.const(g.ctx, 1)
    while (gt % c.den).degree >= 0:
        t += 1
        gt = gt * g
        if t > c.den.degree + 1:
            raise MimicError(f"denominator {c.den.render()} does not divide a power of {g.render()}")
    return c.num * (gt // c.den) * g ** (t * (Q - 2))


def open_set_mimic(w: AutWord, m: int, g: ZPoly | None = None) -> AutWord:
    """Denominator-free word agreeing with w at every c in F_{q^m} with g(c) != 0."""
    if not is_normalized(w):
        raise MimicError("open-set mimicking needs a normalized word")
    ctx = _ring_ctx(w.ring)
    PR = zpoly_ring(ctx)
    if g is None:
        g = denominator_radical(w)
    Q = ctx.q ** m
    K = ratfunc_field(ctx)
    if w.ring == PR:
        return w
    if w.ring != K:
        raise MimicError("open-set mimicking expects a word over F_q(Z)")
    return w.map_coeffs(lambda c: power_replacement(c, g, Q), PR)


def rho_gadget(g: ZPoly, m: int) -> ZPoly:
    """1 - g^{Q-1}: 1 on V(g), 0 elsewhere on F_Q."""
    Q = g.ctx.q ** m
    return ZPoly.const(g.ctx, 1) - g ** (Q - 1)


def _lift_table(ctx: FieldCtx, target: FieldCtx, alpha: int, d: int) -> dict:
    """Map every element of F_q(α) ⊆ F_Q to h ∈ F_q[Z], deg h < d, h(α) = it."""
    emb = embed_field(ctx, target)
    powers = [target.pow(alpha, k) for k in range(d)]
    table = {}
    coeffs = [0] * d
    total = ctx.q ** d
    for idx in range(total):
        x, acc = idx, 0
        for k in range(d):
            coeffs[k] = x % ctx.q
            x //= ctx.q
            if coeffs[k]:
                acc = target.add(acc, target.mul(emb(coeffs[k]), powers[k]))
        table.setdefault(acc, ZPoly(ctx, list(coeffs)))
    return table


def _frobenius_orbits(g: ZPoly, target: FieldCtx):
    """Irreducible factors of g with a root in F_Q: (factor, smallest root)."""
    ctx = g.ctx
    roots = [c for c in range(target.q) if g(c, target) == 0]
    seen, out = set(), []
    back = {v: k for k, v in enumerate(embed_field(ctx, target).table)}
    for r in roots:
        if r in seen:
            continue
        orbit = [r]
        x = target.pow(r, ctx.q)
        while x != r:
            orbit.append(x)
            x = target.pow(x, ctx.q)
        seen.update(orbit)
        # minimal polynomial Π (Z - β) has coefficients in F_q
        poly = [1]
        for b in orbit:
            nb = target.neg(b)
            new = [0] * (len(poly) + 1)
            for k, c in enumerate(poly):
                new[k] = target.add(new[k], target.mul(c, nb))
                new[k + 1] = target.add(new[k + 1], c)
            poly = new
        out.append((ZPoly(ctx, [back[c] for c in poly]), r))
    return out


def _even_swaps(w: AutWord) -> AutWord:
    """Make the number of swaps even, so the swaps alone multiply to I.

    With determinant 1 this is automatic in odd characteristic.  In
    characteristic 2 one swap is rewritten as U(1) R U(1) R U(1).
    """
    idx = [k for k, (s, _) in enumerate(w.letters) if isinstance(s, R)]
    if len(idx) % 2 == 0:
        return w
    ring = w.ring
    if _ring_ctx(ring).p != 2:
        raise MimicError("permutation factors do not multiply to the identity")
    k = idx[0]
    sw = w.letters[k][0]
    u = _shear(ring, w.n, sw.i, sw.j, ring.one)
    letters = list(w.letters[:k]) + [u, sw, u, sw, u] + list(w.letters[k + 1:])
    return AutWord(ring, w.n, letters)


def closed_set_mimic(F: PolyMap, g_i: ZPoly, m: int) -> AutWord:
    """Word G over F_q[Z] with G_c = F_c on V(g_i) and G_c = I elsewhere on F_Q.

    F is a map over F_q[Z] whose specializations at the roots of g_i have
    linear part of determinant 1.
    """
    ctx = _ring_ctx(F.ring)
    PR = zpoly_ring(ctx)
    target = extension(ctx, m)
    n = F.n
    factors = _frobenius_orbits(g_i, target)
    if not factors:
        return AutWord(PR, n, [])
    if len(factors) > 1:
        raise MimicError("g_i is not irreducible")
    gi, alpha = factors[0]
    F_alpha = specialize(F, alpha, target)
    if F_alpha.is_identity():
        return AutWord(PR, n, [])
    if n != 2:
        raise MimicError("closed-set mimicking decomposes automatically only for n = 2")
    local = normalize_word(jvdk_decompose_dim2(F_alpha), allow_affine=True)
    local = _even_swaps(local)
    lift = _lift_table(ctx, target, alpha, gi.degree)
    rho = rho_gadget(gi, m)
    letters = []
    for s, _ in local.letters:
        if isinstance(s, R):
            letters.append(s)
            continue
        if isinstance(s, T):
            if s.c not in lift:
                raise MimicError("coefficient outside F_q(α)")
            letters.append(T(s.i, rho * lift[s.c]))
            continue
        tails = []
        for t in s.tails:
            terms = {}
            for e, c in t.terms.items():
                if c not in lift:
                    raise MimicError("coefficient outside F_q(α)")
                terms[e] = rho * lift[c]
            tails.append(Poly(PR, n, terms))
        letters.append(J((PR.one,) * n, tuple(tails)))
    return AutWord(PR, n, letters)


# -- affine part over F_q[Z] -------------------------------------------------------------------------


def _affine_word_over_zpoly(F: PolyMap) -> AutWord:
    """Letters over F_q[Z] composing to the affine part of F (n = 2)."""
    PR = F.ring
    n = F.n
    M = [list(r) for r in F.linear_matrix()]
    v = F.constant_vector()
    if n != 2:
        raise MimicError("affine splitting over F_q[Z] is implemented for n = 2")
    ops = []  # left multiplications applied to M, as (i, j, c): row_i += c row_j
    guard = 0
    while not M[1][0].is_zero():
        guard += 1
        if guard > 1000:  # pragma: no cover
            raise MimicError("Euclid reduction did not terminate")
        if M[0][0].is_zero() or M[0][0].degree < M[1][0].degree:
            if M[0][0].is_zero():
                M[0] = [a + b for a, b in zip(M[0], M[1])]
                ops.append((0, 1, PR.one))
                continue
            qt = M[1][0] // M[0][0]
            M[1] = [a - qt * b for a, b in zip(M[1], M[0])]
            ops.append((1, 0, -qt))
        else:
            qt = M[0][0] // M[1][0]
            M[0] = [a - qt * b for a, b in zip(M[0], M[1])]
            ops.append((0, 1, -qt))
    a, b, d = M[0][0], M[0][1], M[1][1]
    if a.degree != 0 or d.degree != 0:
        raise MimicError("linear part is not invertible over F_q[Z]")
    ctx = PR.ctx
    # E_k ... E_1 L = [[a, b], [0, d]]  =>  L = E_1^{-1} ... E_k^{-1} diag(a, d) U
    letters = [T(1, v[0]), T(2, v[1])]
    letters = [s for s in letters if not s.c.is_zero()]
    for i, j, c in ops:
        inv_c = -c
        if i == 0:
            letters.append(_shear(PR, 2, 1, 2, inv_c))
        else:
            letters += [R(1, 2), _shear(PR, 2, 1, 2, inv_c), R(1, 2)]
    if a.coeffs[0] != 1:
        letters.append(S(1, a))
    if d.coeffs[0] != 1:
        letters.append(S(2, d))
    u = b * ZPoly.const(ctx, ctx.inv(a.coeffs[0]))
    if not u.is_zero():
        letters.append(_shear(PR, 2, 1, 2, u))
    return AutWord(PR, 2, letters)


# -- the full pipeline ----------------------------------------------------------------------------------


@dataclass
class MimicResult:
    q: int
    m: int
    g: ZPoly
    word: AutWord
    certificate: list = field(default_factory=list)
    stages: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return bool(self.certificate) and all(ok for _, ok in self.certificate)

    def to_json(self) -> dict:
        ctx = self.g.ctx
        target = extension(ctx, self.m)
        return {
            "q": self.q,
            "m": self.m,
            "g": self.g.render(),
            "word": self.word.serialize().splitlines(),
            "word_length": len(self.word),
            "certificate": [{"c": target.render(c), "pass": ok} for c, ok in self.certificate],
            "all_pass": self.all_pass,
        }


def specialize_word(w: AutWord, c: int, target: FieldCtx) -> AutWord:
    ring = w.ring
    try:
        return w.map_coeffs(lambda a: ring.specialize(a, c, target), target)
    except ZeroDivisionError:
        raise MimicError(f"a denominator vanishes at c = {target.render(c)}") from None


def certify(T_word: AutWord, F: PolyMap, m: int) -> list:
    ctx = _ring_ctx(F.ring)
    target = extension(ctx, m)
    out = []
    for c in range(target.q):
        Tc = word_to_map(specialize_word(T_word, c, target))
        out.append((c, Tc == specialize(F, c, target)))
    return out


def mimic_fixed_variable(word: AutWord, F: PolyMap, m: int) -> MimicResult:
    """Word T over F_q[Z] with T_c = F_c for all c in F_{q^m} (n = 2).

    ``word`` composes to F over F_q(Z); F itself has coefficients in F_q[Z].
    """
    ctx = _ring_ctx(F.ring)
    PR = zpoly_ring(ctx)
    if F.ring != PR:
        raise MimicError("F must have coefficients in F_q[Z]")
    if F.n != 2:
        raise MimicError("the automatic pipeline handles n = 2 slices")
    K = ratfunc_field(ctx)
    wK = to_ratfunc_word(word)
    if word_to_map(wK) != to_ratfunc_map(F):
        raise MimicError("the word does not compose to F")
    # (1) split off the affine part
    aff_word = _affine_word_over_zpoly(F.affine_part())
    rest = to_ratfunc_word(aff_word).inverse() * wK
    # (2) normalize over F_q(Z)
    normal = normalize_word(rest)
    g = denominator_radical(normal)
    # (3) open set
    G = open_set_mimic(normal, m, g)
    F_rest = compose(word_to_map(aff_word.inverse()), F)
    residual = compose(word_to_map(G.inverse()), F_rest)
    # (4) closed set, one gadget per irreducible factor of g with roots in F_Q
    target = extension(ctx, m)
    gadgets = []
    factors = _frobenius_orbits(g, target) if g.degree > 0 else []
    for gi, _ in factors:
        gadgets.append(closed_set_mimic(residual, gi, m))
    T_word = aff_word * G
    for gw in gadgets:
        T_word = T_word * gw
    result = MimicResult(ctx.q, m, g, T_word)
    result.certificate = certify(T_word, F, m)
    result.stages = {
        "affine_letters": len(aff_word),
        "normalized_letters": len(normal),
        "open_set_letters": len(G),
        "factors": [gi.render() for gi, _ in factors],
        "gadget_letters": [len(gw) for gw in gadgets],
    }
    return result


def frobenius_on_map(F: PolyMap, times: int = 1) -> PolyMap:
    """Apply x -> x^{p^times} to every coefficient of a map over a finite field."""
    ctx = F.ring
    return F.map_coeffs(lambda a: ctx.frobenius(a, times), ctx)


__all__ = [
    "MimicError", "MimicResult", "certify", "closed_set_mimic", "denominator_radical",
    "diag_block_letters", "frobenius_on_map", "is_normalized", "jacobian_determinant",
    "jvdk_decompose_dim2", "mimic_fixed_variable", "nagata_family", "normalize_word",
    "open_set_mimic", "power_replacement", "rho_gadget", "sign_flip_letters",
    "specialize_word", "to_ratfunc_map", "to_ratfunc_word",
]
