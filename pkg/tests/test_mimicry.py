import random

import pytest
from hypothesis import given, strategies as st

from polymimic.experiments import random_word
from polymimic.fields import extension, field_create
from polymimic.maps import E, R, S, T, AutWord, Poly, PolyMap, compose, parse_map, specialize, word_to_map
from polymimic.mimicry import (MimicError, certify, closed_set_mimic, denominator_radical, diag_block_letters,
                               frobenius_on_map, is_normalized, jacobian_determinant, jvdk_decompose_dim2, mimic_fixed_variable,
                               nagata_family, normalize_word, open_set_mimic, power_replacement, rho_gadget,
                               sign_flip_letters, specialize_word, to_ratfunc_map, to_ratfunc_word)
from polymimic.rational import RatFunc, ZPoly, ratfunc_field, zpoly_ring

F2, F3, F4, F5 = field_create(2), field_create(3), field_create(2, 2), field_create(5)


def zp(ctx, *coeffs):
    return ZPoly(ctx, list(coeffs))


def nagata(ctx):
    return nagata_family(ZPoly.const(ctx, 1), ZPoly.z(ctx))


# -- Nagata family ---------------------------------------------------------------------------


def test_nagata_map_matches_classic_formula():
    Fm, w = nagata(F3)
    PR = zpoly_ring(F3)
    X, Y = Poly.var(PR, 2, 1), Poly.var(PR, 2, 2)
    Z = Poly.const(PR, 2, ZPoly.z(F3))
    delta = Z * X + Y * Y
    two = Poly.const(PR, 2, PR.from_int(2))
    assert Fm == PolyMap(PR, [X - two * Y * delta - Z * delta * delta, Y + Z * delta])
    assert len(w) == 5


def test_nagata_with_f_zero():
    Fm, w = nagata_family(ZPoly(F3), ZPoly.z(F3))
    assert Fm.comps[0] == Poly.var(zpoly_ring(F3), 2, 1)
    assert word_to_map(w) == to_ratfunc_map(Fm)


def test_nagata_with_g_one_is_denominator_free():
    Fm, w = nagata_family(ZPoly.const(F3, 1), ZPoly.const(F3, 1))
    assert denominator_radical(w).degree == 0
    assert word_to_map(w) == to_ratfunc_map(Fm)


def test_nagata_rejects_zero_g():
    with pytest.raises(MimicError):
        nagata_family(ZPoly.const(F3, 1), ZPoly(F3))


@pytest.mark.parametrize("ctx", [F2, F3, F5])
def test_nagata_word_recomposes(ctx):
    Z = ZPoly.z(ctx)
    for f, g in [(ZPoly.const(ctx, 1), Z), (Z + ZPoly.const(ctx, 1), Z * Z + Z), (Z * Z, Z ** 3 + ZPoly.const(ctx, 1))]:
        Fm, w = nagata_family(f, g)
        assert word_to_map(w) == to_ratfunc_map(Fm)
        assert jacobian_determinant(Fm).degree == 0


# -- normalization -------------------------------------------------------------------------------


def test_normalize_keeps_normal_words():
    Fm, w = nagata(F3)
    assert is_normalized(w)
    out = normalize_word(w)
    assert is_normalized(out)
    assert word_to_map(out) == word_to_map(w)


@pytest.mark.parametrize("ctx,f", [(F5, 2), (F3, 2), (F4, 2), (field_create(7), 3)])
def test_diag_block_is_eight_letters(ctx, f):
    w = AutWord(ctx, 2, diag_block_letters(ctx, 2, 1, 2, f))
    assert len(w) == 8 and is_normalized(w)
    expected = AutWord(ctx, 2, [S(1, ctx.inv(f)), S(2, f)]).to_map()
    assert word_to_map(w) == expected
    # without the closing swap the product is anti-diagonal
    anti = PolyMap(ctx, [Poly.var(ctx, 2, 2).scale(ctx.inv(f)), Poly.var(ctx, 2, 1).scale(f)])
    assert word_to_map(AutWord(ctx, 2, w.letters[:7])) == anti


def test_diag_block_over_rational_functions():
    K = ratfunc_field(F3)
    f = RatFunc(ZPoly.z(F3))
    w = AutWord(K, 2, [S(1, K.inv(f)), S(2, f)])
    out = normalize_word(w)
    assert is_normalized(out) and len(out) == 8
    assert word_to_map(out) == word_to_map(w)


@pytest.mark.parametrize("ctx", [F3, F5])
def test_sign_flip(ctx):
    w = AutWord(ctx, 2, sign_flip_letters(ctx, 2, 1, 2))
    assert is_normalized(w)
    assert word_to_map(w) == parse_map("(x, -y)", ctx, 2)


def test_normalize_rejects_affine_part():
    with pytest.raises(MimicError):
        normalize_word(AutWord(F3, 2, [T(1, 1)]))
    # determinant 2 is not ±1 over F_5
    with pytest.raises(MimicError):
        normalize_word(AutWord(F5, 2, [S(1, 2)]))


def test_normalize_reflection_over_f3():
    # S_{1,2} has determinant -1 over F_3 and is reachable
    w = AutWord(F3, 2, [S(1, 2)])
    out = normalize_word(w)
    assert is_normalized(out) and word_to_map(out) == word_to_map(w)


@pytest.mark.parametrize("ctx", [F3, F5, F4])
def test_normalize_random_words(ctx):
    rng = random.Random(ctx.q)
    done = 0
    while done < 25:
        w = random_word(ctx, 2, rng.randint(1, 6), rng, max_exp=2)
        F = word_to_map(w)
        # strip the affine part so the precondition holds
        A = AutWord(ctx, 2, [jvdk_decompose_dim2(F.affine_part()).letters[-1]])
        w2 = A.inverse() * w
        if not word_to_map(w2).affine_part().is_identity():
            continue
        out = normalize_word(w2)
        assert is_normalized(out)
        assert word_to_map(out) == word_to_map(w2)
        done += 1


# -- Jung–van der Kulk ----------------------------------------------------------------------------


def test_jvdk_examples():
    aff = parse_map("(x + 2y + 1, y + 2)", F3, 2)
    assert len(jvdk_decompose_dim2(aff)) == 1
    tri = parse_map("(x + y^2, y)", F3, 2)
    w = jvdk_decompose_dim2(tri)
    assert [s.kind for s, _ in w.letters if s.kind != "A" or not s.to_map(F3, 2).is_identity()] == ["E"]
    assert word_to_map(w) == tri


def test_jvdk_rejects_non_automorphism():
    with pytest.raises(MimicError):
        jvdk_decompose_dim2(parse_map("(x^2, y)", F3, 2))
    with pytest.raises(MimicError):
        # constant Jacobian, but no cancellation
        jvdk_decompose_dim2(parse_map("(x + y^2, y + x^2)", F2, 2))


@pytest.mark.parametrize("ctx", [F2, F3])
def test_jvdk_round_trip(ctx):
    rng = random.Random(17)
    for _ in range(100):
        w = random_word(ctx, 2, rng.randint(1, 8), rng)
        F = word_to_map(w)
        back = jvdk_decompose_dim2(F)
        assert word_to_map(back) == F


# -- open set --------------------------------------------------------------------------------------


def test_open_set_denominator_free_is_unchanged():
    Fm, w = nagata_family(ZPoly.const(F3, 1), ZPoly.const(F3, 1))
    G = open_set_mimic(w, 1)
    assert word_to_map(to_ratfunc_word(G)) == word_to_map(w)


@pytest.mark.parametrize("m", [1, 2])
def test_open_set_matches_off_the_zero_locus(m):
    Fm, w = nagata(F3)
    G = open_set_mimic(w, m)
    target = extension(F3, m)
    for c in range(1, target.q):
        assert word_to_map(specialize_word(G, c, target)) == specialize(Fm, c, target)


def test_open_set_requires_normalized_word():
    K = ratfunc_field(F3)
    with pytest.raises(MimicError):
        open_set_mimic(AutWord(K, 2, [S(1, K.from_int(2))]), 1)


@pytest.mark.parametrize("ctx,m", [(F2, 1), (F2, 2), (F3, 1), (F3, 2), (F5, 1)])
def test_power_replacement_is_exact_off_the_zero_locus(ctx, m):
    target = extension(ctx, m)
    Q = target.q
    Z = ZPoly.z(ctx)
    g = Z * Z + Z + ZPoly.const(ctx, ctx.neg(1))
    for t in range(1, 4):
        c = RatFunc(ZPoly.const(ctx, 1), g ** t)
        rep = power_replacement(c, g, Q)
        for x in range(Q):
            gx = g(x, target)
            if gx:
                assert rep(x, target) == target.inv(target.pow(gx, t))


# -- closed set -------------------------------------------------------------------------------------


@pytest.mark.parametrize("ctx", [F2, F3])
@pytest.mark.parametrize("m", [1, 2])
def test_rho_gadget_indicator(ctx, m):
    target = extension(ctx, m)
    Z = ZPoly.z(ctx)
    for g in [Z, Z * Z + ZPoly.const(ctx, 1), Z * Z + Z + ZPoly.const(ctx, 1)]:
        rho = rho_gadget(g, m)
        for c in range(target.q):
            assert rho(c, target) == (1 if g(c, target) == 0 else 0)


def test_closed_set_identity_gives_empty_word():
    PR = zpoly_ring(F3)
    assert len(closed_set_mimic(PolyMap.identity(PR, 2), ZPoly.z(F3), 1)) == 0


def test_closed_set_nagata_at_zero():
    Fm, _ = nagata(F3)
    G = closed_set_mimic(Fm, ZPoly.z(F3), 1)
    assert word_to_map(specialize_word(G, 0, F3)) == parse_map("(x - 2y^3, y)", F3, 2)
    for c in (1, 2):
        assert word_to_map(specialize_word(G, c, F3)).is_identity()


def test_closed_set_without_roots_is_empty():
    Fm, _ = nagata_family(ZPoly.const(F2, 1), zp(F2, 1, 1, 1))
    assert len(closed_set_mimic(Fm, zp(F2, 1, 1, 1), 1)) == 0


def test_closed_set_at_quadratic_factor():
    # Z^2 + 1 is irreducible over F_3 and splits over F_9
    g = zp(F3, 1, 0, 1)
    Fm, _ = nagata_family(ZPoly.const(F3, 1), g)
    G = closed_set_mimic(Fm, g, 2)
    F9 = extension(F3, 2)
    for c in range(9):
        Gc = word_to_map(specialize_word(G, c, F9))
        if g(c, F9) == 0:
            assert Gc == specialize(Fm, c, F9)
        else:
            assert Gc.is_identity()


# -- Galois equivariance ----------------------------------------------------------------------------


@given(st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=3), min_size=4, max_size=4),
       st.integers(0, 8))
def test_specialization_commutes_with_frobenius(coeff_lists, a):
    PR = zpoly_ring(F3)
    F9 = extension(F3, 2)
    X, Y = Poly.var(PR, 2, 1), Poly.var(PR, 2, 2)
    cs = [Poly.const(PR, 2, zp(F3, *cl)) for cl in coeff_lists]
    F = PolyMap(PR, [X + cs[0] * Y ** 2 + cs[1] * Y, Y + cs[2] * X * X + cs[3]])
    lhs = specialize(F, F9.frobenius(a, 1), F9)
    rhs = frobenius_on_map(specialize(F, a, F9))
    assert lhs == rhs


# -- the pipeline -------------------------------------------------------------------------------------


def test_pipeline_on_polynomial_word_is_trivial():
    PR = zpoly_ring(F3)
    w = AutWord(PR, 2, [E(1, (2,), ZPoly.z(F3))])
    res = mimic_fixed_variable(w, word_to_map(w), 1)
    assert res.all_pass and len(res.certificate) == 3
    assert res.g.degree == 0


@pytest.mark.parametrize("m", [1, 2])
def test_pipeline_nagata_over_f3(m):
    Fm, w = nagata(F3)
    res = mimic_fixed_variable(w, Fm, m)
    assert len(res.certificate) == 3 ** m
    assert res.all_pass
    assert res.word.ring == zpoly_ring(F3)


@pytest.mark.parametrize("ctx,f,g,m", [
    (F2, (1,), (0, 1), 2),
    (F2, (1, 1), (1, 0, 1), 1),
    (F5, (0, 0, 1), (0, 1, 1), 1),
    (F4, (0, 1), (1, 1, 0, 1), 1),
    (F3, (0,), (0, 1), 1),
])
def test_pipeline_other_family_members(ctx, f, g, m):
    Fm, w = nagata_family(zp(ctx, *f), zp(ctx, *g))
    res = mimic_fixed_variable(w, Fm, m)
    assert res.all_pass


def test_pipeline_with_affine_part():
    PR = zpoly_ring(F3)
    z = ZPoly.z(F3)
    Fm, w = nagata(F3)
    A = AutWord(PR, 2, [T(1, z), S(2, PR.from_int(2)), E(1, (1,), z * z + ZPoly.const(F3, 1))])
    word = to_ratfunc_word(A) * w
    F = compose(word_to_map(A), Fm)
    res = mimic_fixed_variable(word, F, 1)
    assert res.all_pass


def test_pipeline_rejects_mismatched_word():
    Fm, w = nagata(F3)
    Fo, _ = nagata_family(ZPoly.const(F3, 2), ZPoly.z(F3))
    with pytest.raises(MimicError):
        mimic_fixed_variable(w, Fo, 1)


def test_certificate_detects_wrong_word():
    Fm, w = nagata(F3)
    PR = zpoly_ring(F3)
    cert = certify(AutWord(PR, 2, []), Fm, 1)
    # F_c is never the identity: the second component is Y + c^2 X + c Y^2
    assert [ok for _, ok in cert] == [False, False, False]


def test_result_json_shape():
    Fm, w = nagata(F3)
    out = mimic_fixed_variable(w, Fm, 1).to_json()
    assert set(out) == {"q", "m", "g", "word", "word_length", "certificate", "all_pass"}
    assert [c["c"] for c in out["certificate"]] == ["0", "1", "2"]
    assert out["all_pass"] is True
