"""The nine acceptance criteria, each checked exactly and against its time budget.

Every test appends one PASS/FAIL line to ``conftest.ACCEPTANCE_LINES``; the
lines are printed in a separate section at the end of the pytest run.
"""

import itertools
import random
import time

import conftest
from oracles import bfs_order
from polymimic.constructions import (b1_closed_form, b1_word, build_tm_word, derksen_mimic_word, char2_power_identities,
                                     tame_generators_word, tm_closed_form, tm_conjugate, tm_psi_check,
                                     uses_derksen_generators, uses_tame_generators, vandermonde_alpha,
                                     vandermonde_check)
from polymimic.experiments import (experiment_glin_index, generator_permutations, parity_census,
                                   pi_homomorphism_check, random_word, tlin_identity_check)
from polymimic.fields import field_create, parse_field_spec
from polymimic.maps import E, AutWord, word_to_map
from polymimic.mimicry import jvdk_decompose_dim2, mimic_fixed_variable, nagata_family
from polymimic.perms import bsgs_build, induced_permutation, normal_closure
from polymimic.rational import ZPoly

F2, F3, F4 = field_create(2), field_create(3), field_create(2, 2)


def record(number, title, ok, seconds, budget, detail=""):
    in_time = seconds < budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"[{status}] {number}. {title} ({seconds:.2f}s, budget {budget}s)"
    if detail:
        line += f": {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert in_time, line


def elementary(ctx, n, alpha):
    return AutWord(ctx, n, [E(1, tuple(alpha), 1)])


def test_criterion_1_appendix_index():
    t0 = time.perf_counter()
    rep = experiment_glin_index(field_q=2, n=2, m=2)
    index = [e["value"] for e in rep.expected if e["name"] == "index"][0]
    dt = time.perf_counter() - t0
    record(1, "index of the linear normal closure in the tame image over F_4", index == 2 and rep.passed,
           dt, 5, f"index {index}, tame order {rep.quantities['tame_group']['order_decimal']}")


def test_criterion_2_full_symmetric_image():
    t0 = time.perf_counter()
    G = bsgs_build(generator_permutations("tame", F2, 3))
    dt = time.perf_counter() - t0
    record(2, "tame image over F_2 in three variables is Sym(8)", G.order == 40320, dt, 5,
           f"order {G.order}")


def test_criterion_3_parity():
    t0 = time.perf_counter()
    tame4 = parity_census(F4, 2, 1, "tame").quantities["all_even"]
    lin2 = parity_census(F2, 3, 1, "linear").quantities["all_even"]
    dt = time.perf_counter() - t0
    record(3, "tame generators over F_4 and linear generators over F_2 are even", tame4 and lin2, dt, 1,
           f"tame F_4 n=2 all even {tame4}, linear F_2 n=3 all even {lin2}")


def test_criterion_4_tm_correctness():
    t0 = time.perf_counter()
    results = {}
    for q, m, n in [(2, 1, 3), (2, 2, 3), (3, 1, 3), (4, 1, 3)]:
        ctx = parse_field_spec(str(q))
        ok = tm_psi_check(ctx, n, m)
        if ctx.p == 2:
            ok = ok and word_to_map(b1_word(ctx, n)) == b1_closed_form(ctx, n)
        else:
            ok = ok and word_to_map(build_tm_word(ctx, n, m)) == tm_closed_form(ctx, n, m)
        results[(q, m, n)] = ok
    dt = time.perf_counter() - t0
    record(4, "T_m agrees with psi off the hyperplane and with the closed forms", all(results.values()), dt, 10,
           ", ".join(f"q={q} m={m} n={n} {'ok' if v else 'FAILED'}" for (q, m, n), v in results.items()))


def test_criterion_5_vandermonde():
    t0 = time.perf_counter()
    bad = []
    count = 0
    for p in (2, 3, 5):
        for k in range(4):
            for l in range(k * p, k * p + p):
                count += 1
                if not vandermonde_check(p, k, l, vandermonde_alpha(p, k, l)):
                    bad.append((p, k, l))
    dt = time.perf_counter() - t0
    record(5, "shifted-power combinations give Y^l plus lower terms", not bad, dt, 5,
           f"{count} cases, failures {bad}")


def test_criterion_6_derksen_mimicking():
    t0 = time.perf_counter()
    bad = []
    for alpha in itertools.product(range(4), repeat=2):
        w = derksen_mimic_word(alpha, 3, F2, 2)
        same = induced_permutation(w, 2) == induced_permutation(elementary(F2, 3, alpha), 2)
        if not (same and uses_derksen_generators(w)):
            bad.append(alpha)
    dt = time.perf_counter() - t0
    record(6, "Derksen words induce the elementary bijections on (F_4)^3", not bad, dt, 60,
           f"16 exponents, failures {bad}")


def test_criterion_7_tame_generating_set():
    t0 = time.perf_counter()
    bad = []
    count = 0
    for n in (2, 3):
        for p in (2, 3):
            ctx = field_create(p)
            for v in itertools.product(range(2 * p), repeat=n - 1):
                count += 1
                w = tame_generators_word(v, n, ctx)
                if not (uses_tame_generators(w) and word_to_map(w) == elementary(ctx, n, v).to_map()):
                    bad.append((n, p, v))
    dt = time.perf_counter() - t0
    record(7, "elementaries are exact words in affine maps and the normalized set", not bad, dt, 30,
           f"{count} exponent vectors, failures {bad}")


def test_criterion_8_fixed_variable_mimicking():
    t0 = time.perf_counter()
    outcome = {}
    for m in (1, 2):
        F, w = nagata_family(ZPoly.const(F3, 1), ZPoly.z(F3))
        res = mimic_fixed_variable(w, F, m)
        outcome[m] = (res.all_pass, len(res.certificate))
    dt = time.perf_counter() - t0
    ok = all(passed and size == 3 ** m for m, (passed, size) in outcome.items())
    record(8, "Nagata map over F_3 has a passing certificate", ok, dt, 10,
           ", ".join(f"m={m} {size} values {'pass' if p else 'FAIL'}" for m, (p, size) in outcome.items()))


def _groups_up_to_8_factorial():
    """Every permutation group of order <= 8! that the other criteria build."""
    groups = []
    for spec, ctx, n, m in [("tame", F2, 3, 1), ("tame-deg3", F2, 2, 2), ("linear", F2, 3, 1),
                            ("affine", F2, 3, 1), ("derksen", F2, 3, 1), ("linear", F3, 2, 1),
                            ("affine", F3, 2, 1), ("tame", F3, 2, 1), ("tame", F4, 2, 1)]:
        groups.append(generator_permutations(spec, ctx, n, m))
    tame4 = generator_permutations("tame-deg3", F2, 2, 2)
    H = normal_closure(generator_permutations("linear", F2, 2, 2), tame4)
    groups.append(H.strong_generators)
    return groups


def _conjugation_failures(m):
    """α in {0..Q-1}^2 where tm^{-1} E_α tm and E_β induce different bijections, β taken literally."""
    Q = 2 ** m
    tm = build_tm_word(F2, 3, m)
    bad = []
    for a2, a3 in itertools.product(range(Q), repeat=2):
        beta = (a2, a3 + a2 + 1)
        lhs = induced_permutation(tm_conjugate(elementary(F2, 3, (a2, a3)), tm), m)
        if lhs != induced_permutation(elementary(F2, 3, beta), m):
            bad.append((a2, a3))
    return bad


def test_criterion_9_oracle_equivalences():
    t0 = time.perf_counter()
    sub = {}

    reps = [pi_homomorphism_check(F2, 2, 2, 100, seed=1), pi_homomorphism_check(F3, 2, 1, 100, seed=2),
            pi_homomorphism_check(F2, 3, 1, 100, seed=3)]
    sub["pi homomorphism (300 pairs)"] = all(r.passed for r in reps)

    orders_ok = True
    checked = 0
    for gens in _groups_up_to_8_factorial():
        B = bsgs_build(gens)
        if B.order <= 40320:
            checked += 1
            orders_ok &= B.order == bfs_order([list(g.images) for g in gens], B.degree)
    sub[f"Schreier-Sims vs BFS ({checked} groups)"] = orders_ok

    rng = random.Random(2024)
    trips = 0
    jvdk_ok = True
    for ctx in (F2, F3):
        for _ in range(100):
            F = word_to_map(random_word(ctx, 2, rng.randint(1, 8), rng))
            jvdk_ok &= word_to_map(jvdk_decompose_dim2(F)) == F
            trips += 1
    sub[f"jvdk round trip ({trips} words)"] = jvdk_ok

    conj_bad = {m: _conjugation_failures(m) for m in (1, 2)}
    sub["conjugation shifts exponents, all α, m <= 2"] = not any(conj_bad.values())

    sub["Frobenius and h_m identities, m <= 3"] = all(
        r["frobenius"] and r["h_m"] for r in (char2_power_identities(m) for m in (1, 2, 3)))

    tl_ok = True
    for ctx in (F3, F4):
        for alpha in itertools.product(range(ctx.q), repeat=2):
            tl_ok &= tlin_identity_check(ctx, alpha, 3).passed
    sub["scaling commutator identity, q in {3, 4}"] = tl_ok

    dt = time.perf_counter() - t0
    detail = "; ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in sub.items())
    if conj_bad[1] or conj_bad[2]:
        detail += f"; conjugation mismatches at α = {conj_bad}"
    record(9, "oracle equivalences", all(sub.values()), dt, 120, detail)
