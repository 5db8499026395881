import itertools
import math

import pytest
import sympy

from polymimic.constructions import (ConstructionError, ExponentPair, b1_closed_form, b1_word, build_tm_word,
                                     derksen_mimic_word, elementary_in_DA_word, exponent_reach_word, char2_power_identities,
                                     gcd_shift, replay, tame_generators_word, tm_closed_form, tm_conjugate,
                                     tm_psi_check, uses_derksen_generators, uses_tame_generators,
                                     vandermonde_alpha, vandermonde_check)
from polymimic.fields import field_create
from polymimic.maps import E, AutWord, parse_map, word_to_map
from polymimic.perms import induced_permutation

F2, F3, F4 = field_create(2), field_create(3), field_create(2, 2)


def elementary(ctx, n, alpha):
    return AutWord(ctx, n, [E(1, tuple(alpha), 1)])


# -- Vandermonde ---------------------------------------------------------------------


def sympy_vandermonde_ok(p, k, l, alpha):
    Y = sympy.symbols("Y")
    N = k * p + p - 1
    expr = sum(a * (Y + i) ** N for i, a in enumerate(alpha)) - Y ** l
    P = sympy.Poly(sympy.expand(expr), Y, modulus=p)
    return P.is_zero or P.degree() < k * p


def test_vandermonde_examples():
    assert vandermonde_alpha(2, 1, 3) == [1, 0]
    assert vandermonde_alpha(2, 1, 2) == [1, 1]
    with pytest.raises(ConstructionError):
        vandermonde_alpha(3, 0, 5)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_vandermonde_against_sympy(p, k):
    for l in range(k * p, k * p + p):
        alpha = vandermonde_alpha(p, k, l)
        assert len(alpha) == p
        assert vandermonde_check(p, k, l, alpha)
        assert sympy_vandermonde_ok(p, k, l, alpha)


# -- exponent pairs ------------------------------------------------------------------


def test_gcd_shift_instance():
    assert gcd_shift(2, 3, 12) == 3
    assert math.gcd(2 + 3 * 3, 12) == 1


def test_reach_examples():
    s = ExponentPair(1, 1, 3)
    assert exponent_reach_word(s, s) == []
    seq = exponent_reach_word(ExponentPair(0, 1, 3), s)
    assert replay(seq, s) == ExponentPair(0, 1, 3)


def test_reach_rejects_stratum_mismatch():
    with pytest.raises(ConstructionError):
        exponent_reach_word(ExponentPair(2, 2, 15), ExponentPair(0, 0, 15))


@pytest.mark.parametrize("M", [3, 7, 8, 12, 15, 24, 26])
def test_reach_replay_exhaustive(M):
    for a, b in itertools.product(range(M), repeat=2):
        target = ExponentPair(a, b, M)
        d = target.stratum()
        start = ExponentPair(d - 1, d - 1, M)
        assert replay(exponent_reach_word(target, start), start) == target


# -- exact Derksen words -----------------------------------------------------------------


def test_elementary_examples():
    w = elementary_in_DA_word((2, 2), 3, F3)
    assert len(w) == 1 and w.letters[0][0].kind == "E"
    assert word_to_map(elementary_in_DA_word((0, 0), 3, F3)) == parse_map("(x1 + 1, x2, x3)", F3, 3)
    w = elementary_in_DA_word((1, 2), 3, F3)
    assert uses_derksen_generators(w)
    assert word_to_map(w) == parse_map("(x1 + x2*x3^2, x2, x3)", F3, 3)


@pytest.mark.parametrize("ctx,n", [(F2, 3), (F3, 3), (F4, 3), (F2, 4), (field_create(5), 3)])
def test_elementary_words_small_exponents(ctx, n):
    for alpha in itertools.product(range(ctx.p), repeat=n - 1):
        w = elementary_in_DA_word(alpha, n, ctx)
        assert uses_derksen_generators(w)
        assert word_to_map(w) == elementary(ctx, n, alpha).to_map()


@pytest.mark.parametrize("ctx,alpha", [(F2, (0, 3)), (F2, (2, 0)), (F3, (0, 5)), (F2, (0, 2, 3)),
                                       (F3, (1, 4)), (F3, (0, 4))])
def test_elementary_words_with_zero_slot_or_low_first(ctx, alpha):
    n = len(alpha) + 1
    w = elementary_in_DA_word(alpha, n, ctx)
    assert uses_derksen_generators(w)
    assert word_to_map(w) == elementary(ctx, n, alpha).to_map()


def test_elementary_unsupported_exponent():
    with pytest.raises(ConstructionError):
        elementary_in_DA_word((3, 3), 3, F2)


def test_elementary_scaled():
    w = elementary_in_DA_word((1, 1), 3, F3, c=2)
    assert word_to_map(w) == parse_map("(x1 + 2 x2 x3, x2, x3)", F3, 3)


# -- T_m ---------------------------------------------------------------------------------------


def test_tm_odd_closed_form():
    assert word_to_map(build_tm_word(F3, 3, 1)) == tm_closed_form(F3, 3, 1)


def test_tm_odd_closed_form_f5_and_n4():
    F5 = field_create(5)
    assert word_to_map(build_tm_word(F5, 3, 1)) == tm_closed_form(F5, 3, 1)
    assert word_to_map(build_tm_word(F3, 4, 1)) == tm_closed_form(F3, 4, 1)


def test_b1_closed_form():
    assert word_to_map(b1_word(F2, 3)) == b1_closed_form(F2, 3)
    assert b1_closed_form(F2, 3) == parse_map("(x1 + x1*x3^2 + x2*x3, x1*x3 + x2, x3)", F2, 3)


@pytest.mark.parametrize("ctx,n,m", [(F2, 3, 1), (F2, 3, 2), (F3, 3, 1), (F4, 3, 1), (F2, 4, 1),
                                     (F3, 4, 1), (field_create(5), 3, 1)])
def test_tm_agrees_with_psi(ctx, n, m):
    w = build_tm_word(ctx, n, m)
    assert uses_derksen_generators(w)
    assert tm_psi_check(ctx, n, m)


def test_tm_requires_three_variables():
    with pytest.raises(ConstructionError):
        build_tm_word(F2, 2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_char2_power_identities(m):
    assert char2_power_identities(m) == {"m": m, "frobenius": True, "h_m": True}


def _shifted_beta(alpha, M):
    a2, an = alpha[0], alpha[-1]
    top = (an + a2 + 1 - 1) % M + 1
    return tuple(alpha[:-1]) + (top,)


def test_conjugate_by_empty_word():
    w = elementary(F2, 3, (1, 1))
    assert induced_permutation(tm_conjugate(w, AutWord(F2, 3, [])), 2) == induced_permutation(w, 2)


def test_conjugate_example():
    tm = build_tm_word(F2, 3, 2)
    conj = tm_conjugate(elementary(F2, 3, (1, 1)), tm)
    assert induced_permutation(conj, 2) == induced_permutation(elementary(F2, 3, (1, 3)), 2)


@pytest.mark.parametrize("m", [1, 2])
def test_conjugation_shifts_last_exponent_when_it_is_positive(m):
    M = 2 ** m - 1
    tm = build_tm_word(F2, 3, m)
    for alpha in itertools.product(range(M + 1), range(1, M + 1)):
        conj = tm_conjugate(elementary(F2, 3, alpha), tm)
        beta = _shifted_beta(alpha, M)
        assert induced_permutation(conj, m) == induced_permutation(elementary(F2, 3, beta), m), alpha


def test_conjugation_with_zero_last_exponent_is_not_a_shift():
    # T_m fixes the hyperplane u_3 = 0 pointwise, where E_{1,(1,0)} still moves points
    # but E_{1,(1,2)} does not; the two permutations cannot agree.
    tm = build_tm_word(F2, 3, 1)
    conj = induced_permutation(tm_conjugate(elementary(F2, 3, (1, 0)), tm), 1)
    assert conj != induced_permutation(elementary(F2, 3, _shifted_beta((1, 0), 1)), 1)


# -- Derksen mimicking ------------------------------------------------------------------------


def test_derksen_epsilon_case():
    w = derksen_mimic_word((1, 1), 3, F2, 2)
    assert len(w) == 1


@pytest.mark.parametrize("ctx,m", [(F2, 1), (F2, 2), (F3, 1)])
def test_derksen_mimic_n3(ctx, m):
    Q = ctx.q ** m
    for alpha in itertools.product(range(Q), repeat=2):
        w = derksen_mimic_word(alpha, 3, ctx, m)
        assert uses_derksen_generators(w)
        assert induced_permutation(w, m) == induced_permutation(elementary(ctx, 3, alpha), m), alpha


def test_derksen_mimic_n4_example():
    alpha = (1, 1, 2)
    w = derksen_mimic_word(alpha, 4, F2, 2)
    assert uses_derksen_generators(w)
    assert induced_permutation(w, 2) == induced_permutation(elementary(F2, 4, alpha), 2)


def test_derksen_requires_three_variables():
    with pytest.raises(ConstructionError):
        derksen_mimic_word((1,), 2, F2)


# -- tame generating set -------------------------------------------------------------------------


def test_tame_generator_examples():
    assert len(tame_generators_word((1, 3), 3, F2)) == 1
    # unsorted exponents come back conjugated by a swap
    assert len(tame_generators_word((3, 1), 3, F2)) == 3
    assert word_to_map(tame_generators_word((2,), 2, F2)) == parse_map("(x1 + x2^2, x2)", F2, 2)
    w = tame_generators_word((1, 2), 3, F2)
    assert uses_tame_generators(w)
    assert word_to_map(w) == elementary(F2, 3, (1, 2)).to_map()


@pytest.mark.parametrize("ctx,n", [(F2, 2), (F3, 2), (F2, 3)])
def test_tame_generators_recompose(ctx, n):
    for v in itertools.product(range(2 * ctx.p), repeat=n - 1):
        w = tame_generators_word(v, n, ctx)
        assert uses_tame_generators(w), v
        assert word_to_map(w) == elementary(ctx, n, v).to_map(), v
