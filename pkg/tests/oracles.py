"""Independent reference implementations used to check the package.

None of these reuse the package's arithmetic tables: field elements are
multiplied as coefficient lists and reduced by long division, prime-field
polynomial identities go through sympy, and permutation parity is an
inversion count.
"""

import itertools

import sympy


class NaiveField:
    """F_p[x]/(modulus) with elements encoded as sum c_i p^i."""

    def __init__(self, p, modulus):
        self.p = p
        self.mod = list(modulus)  # low degree first, monic
        self.r = len(self.mod) - 1
        self.q = p ** self.r

    def digits(self, a):
        out = []
        for _ in range(self.r):
            out.append(a % self.p)
            a //= self.p
        return out

    def encode(self, digits):
        return sum(int(c) % self.p * self.p ** i for i, c in enumerate(digits[: self.r]))

    def add(self, a, b):
        return self.encode([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def mul(self, a, b):
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.r)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        for k in range(len(prod) - 1, self.r - 1, -1):
            c = prod[k] % self.p
            if c:
                for i, m in enumerate(self.mod):
                    prod[k - self.r + i] -= c * m
        return self.encode([c % self.p for c in prod[: self.r]])

    def pow(self, a, e):
        out = 1
        for _ in range(e):
            out = self.mul(out, a)
        return out


def naive_for(ctx):
    return NaiveField(ctx.p, ctx.modulus)


def naive_eval_poly(poly, point, nf, coeff_embed=lambda c: c):
    acc = 0
    for exps, c in poly.terms.items():
        t = coeff_embed(c)
        for x, e in zip(point, exps):
            t = nf.mul(t, nf.pow(x, e))
        acc = nf.add(acc, t)
    return acc


def naive_eval_map(F, point, nf, coeff_embed=lambda c: c):
    return tuple(naive_eval_poly(p, point, nf, coeff_embed) for p in F.comps)


def naive_permutation(F, nf, coeff_embed=lambda c: c):
    """Images by enumeration, first coordinate most significant."""
    n = F.n
    pts = list(itertools.product(range(nf.q), repeat=n))
    index = {pt: k for k, pt in enumerate(pts)}
    return [index[naive_eval_map(F, pt, nf, coeff_embed)] for pt in pts]


def inversion_parity(images):
    inv = 0
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            inv += images[i] > images[j]
    return 1 if inv % 2 == 0 else -1


def bfs_order(gens, degree):
    """Group order by closing {identity} under left multiplication by gens."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gl = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gl:
                y = tuple(g[x[i]] for i in range(degree))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


# -- sympy oracles over prime fields -------------------------------------------------------


def sympy_symbols(n):
    return sympy.symbols(f"x1:{n + 1}")


def to_sympy(poly, xs):
    return sum(int(c) * sympy.Mul(*[x ** e for x, e in zip(xs, exps)]) for exps, c in poly.terms.items())


def sympy_terms(expr, xs, p):
    """Reduced coefficient dict of an expression over F_p."""
    P = sympy.Poly(sympy.expand(expr), *xs, modulus=p)
    out = {}
    for exps, c in P.terms():
        c = int(c) % p
        if c:
            out[tuple(exps)] = c
    return out


def sympy_compose(F, G, p):
    """Component term dicts of F∘G over F_p, computed by sympy substitution."""
    xs = sympy_symbols(F.n)
    g = [to_sympy(c, xs) for c in G.comps]
    out = []
    for comp in F.comps:
        expr = to_sympy(comp, xs).subs(dict(zip(xs, g)), simultaneous=True)
        out.append(sympy_terms(expr, xs, p))
    return out
