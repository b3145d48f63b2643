from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from drinfeld.fingrp import bruhat_count
from drinfeld.functor import (BaseModule, CharacterSum, FGPProbe, Piece, act_matrix_on,
                              build_fgp_dual, check_expansion, commutator_power_check,
                              diagonal_control, divided_commutator_expand, exact_triples,
                              exactness_dims_check, height_one_check, kept_part_is_stable,
                              locally_finite_test, lucas_pattern, pairwise_noniso_check,
                              rank_one_apply, reducible_control, simple_quotient_keep,
                              simplicity_probe_fgp, smash_compatibility_check, transitivity_check,
                              trivial, unit_matrix, with_duplicate_summand)
from drinfeld.functor import _monomial_graph
from drinfeld.monomod import act_divided
from drinfeld.rootsys import ParabolicData
from drinfeld.scalars import CharacteristicError

roots = st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(lambda r: r[0] != r[1])


@given(roots, st.integers(1, 11), st.lists(st.integers(-8, 8), min_size=3, max_size=3))
def test_rank_one_operator_on_root_vectors(root, n, m):
    v, w = [0, 0, 0], [0, 0, 0]
    v[root[0]], w[root[1]] = 1, 1
    c, e = act_divided(root, n, tuple(m), 5)
    assert rank_one_apply(v, w, n, m, 5) == ({e: c} if c else {})


# --- the simple quotient ----------------------------------------------------------------

@pytest.mark.parametrize("d,W", [(1, 40), (2, 30), (3, 12)])
def test_keep_rule_matches_reachability(d, W):
    full = BaseModule(d, 0, 5, W)
    reach, reached = _monomial_graph(full)
    inner = [m for m in full.basis if all(abs(e) <= W - 5 for e in m)]
    for m in inner:
        assert simple_quotient_keep(m, 5) == (m in reach)


def test_simple_quotient_on_the_line_skips_multiples_of_p():
    M = BaseModule(1, 0, 5, 20, simple=True)
    assert [m[0] for m in M.basis] == [k for k in range(1, 21) if k % 5]


@pytest.mark.parametrize("d,W", [(1, 30), (2, 12)])
def test_dropped_monomials_are_parabolic_stable(d, W):
    assert kept_part_is_stable(BaseModule(d, 0, 5, W, simple=True)) == []


def test_simple_quotient_only_along_a_point():
    with pytest.raises(ValueError):
        BaseModule(2, 1, 5, 5, simple=True)


# --- construction --------------------------------------------------------------------------

def test_full_group_gives_one_summand():
    from drinfeld.functor import FGPModule
    from drinfeld.fingrp import coset_table
    dims = BaseModule(1, 0, 5, 10).graded_dims()
    F = FGPModule(None, trivial(ParabolicData(1, (2,))), coset_table(1, 5, {0}))
    assert len(F) == 1
    assert F.graded_dims(dims) == dims
    # local cohomology is only a module for the stabilizer of the point
    with pytest.raises(ValueError):
        build_fgp_dual(BaseModule(1, 0, 5, 10), None, {0}, 1, 5)


def test_line_over_f2_has_three_summands():
    dims = BaseModule(1, 0, 5, 10).graded_dims()
    par = ParabolicData(1, (1, 1))
    from drinfeld.functor import FGPModule
    from drinfeld.fingrp import coset_table
    F = FGPModule(None, trivial(par), coset_table(1, 2, set()))
    assert F.graded_dims(dims) == {k: 3 * v for k, v in dims.items()}
    F2 = FGPModule(None, CharacterSum(par, ((0, 0), (1, 0))), coset_table(1, 2, set()))
    assert F2.graded_dims(dims) == {k: 6 * v for k, v in dims.items()}


@pytest.mark.parametrize("d,sub", [(1, set()), (2, {1}), (2, set()), (2, {0})])
def test_summand_count_is_the_index(d, sub):
    M = BaseModule(d, 0, 5, 4)
    if d == 2 and sub == {0}:
        with pytest.raises(ValueError):
            build_fgp_dual(M, None, sub, d, 5)
        return
    F = build_fgp_dual(M, None, sub, d, 5)
    assert len(F) == bruhat_count(F.V.par, 5)


def test_incompatible_contexts():
    M = BaseModule(1, 0, 5, 4)
    with pytest.raises(ValueError):
        build_fgp_dual(M, None, set(), 1, 7)
    with pytest.raises(ValueError):
        build_fgp_dual(M, None, set(), 2, 5)


def test_twisted_action_on_identity_and_reflection():
    M = BaseModule(1, 0, 5, 30)
    F = build_fgp_dual(M, None, set(), 1, 5)
    v = M.extremal
    e = next(i for i, g in enumerate(F.reps) if g == ((1, 0), (0, 1)))
    s = next(i for i, g in enumerate(F.reps) if g == ((0, 1), (1, 0)))
    for n in range(1, 8):
        assert F.twisted_act((0, 1), n, e, {v: 1}) == M.act_root((0, 1), n, {v: 1})
        assert F.twisted_act((0, 1), n, s, {v: 1}) == {}


def test_weight_support_of_weyl_summands():
    """On delta_w the torus acts through w^-1, so weights are permuted."""
    M = BaseModule(2, 0, 5, 6)
    F = build_fgp_dual(M, None, {1}, 2, 5)
    for i, g in enumerate(F.reps):
        if not all(sum(map(bool, r)) == 1 and max(r) == 1 for r in g):
            continue
        w = [r.index(1) for r in g]
        for m in M.basis[:10]:
            for k in range(3):
                out = act_matrix_on(F, unit_matrix(2, (k, k)), 1, {(i, m, 0): 1})
                want = m[w[k]] % 5
                assert out == ({(i, m, 0): want} if want else {})


@pytest.mark.parametrize("d,j,simple,sub", [(1, 0, True, set()), (2, 0, False, {1}),
                                            (2, 0, True, {1}), (2, 1, False, {0})])
def test_smash_compatibility(d, j, simple, sub):
    M = BaseModule(d, j, 5, 10, simple=simple)
    F = build_fgp_dual(M, None, sub, d, 5)
    rng = random.Random(7)
    keys = [(rng.randrange(len(F)), rng.choice(M.basis[:8]), 0) for _ in range(3)]
    assert smash_compatibility_check(F, [1, 2, 5], keys) == []


# --- local finiteness and commutators -------------------------------------------------------

def test_locally_finite_zero_vector():
    M = BaseModule(1, 0, 5, 30)
    assert locally_finite_test(M, (0, 1), {}, 20).nonvanishing == []


@pytest.mark.parametrize("p", [5, 7])
def test_height_one_lucas_pattern(p):
    r = height_one_check(1, p)
    assert r["match"] and r["pairing"] == -2
    assert r["observed"] == lucas_pattern(-2, 2 * p * p, p)
    assert all(n % p == p - 1 for n in range(1, 2 * p * p + 1) if n not in r["observed"])


def test_height_one_certificate_and_levi_direction():
    M = BaseModule(1, 0, 5, 40)
    r = locally_finite_test(M, (0, 1), {(1, -1): 1}, 25, certify=True)
    assert r.certificate["mismatches"] == [] and len(r.nonvanishing) == 25
    M2 = BaseModule(2, 0, 5, 30)
    # X_2 d_1 stays inside the Levi: finite nonvanishing set
    r2 = locally_finite_test(M2, (2, 1), {(4, -1, -3): 1}, 20)
    assert r2.finite and r2.nonvanishing == [1, 2]


def test_expansion_guard_and_trivial_case():
    x = unit_matrix(2, (1, 0))
    with pytest.raises(CharacteristicError):
        divided_commutator_expand(x, [x], 2, 3)
    z = unit_matrix(2, (2, 0))  # commutes with x
    terms = divided_commutator_expand(x, [z], 4, 5)
    assert len(terms) == 1 and terms[0].shifts == (0,) and terms[0].x_power == 4


@pytest.mark.parametrize("k", range(0, 8))
def test_expansion_identity_on_monomials(k):
    assert check_expansion((1, 0), [(0, 1)], k, {(3, -2, -1): 1}, 5)
    assert check_expansion((2, 0), [(0, 1), (1, 2), (0, 2)], k, {(2, -1, -3): 1, (4, -2, -2): 3}, 7)


def test_commutator_power_identity():
    M = BaseModule(2, 0, 5, 30)
    assert commutator_power_check(M, (2, 1), (0, 2), 10)["passed"]
    found = set()
    for x in [(1, 0), (2, 0), (2, 1)]:
        for y in [(0, 1), (0, 2), (1, 2)]:
            try:
                r = commutator_power_check(M, x, y, 5)
            except ValueError:
                continue
            assert r["passed"], r
            found.add(r["k0"])
    assert found <= {1, 2, 3} and 1 in found


# --- non-isomorphism and probes ----------------------------------------------------------------

def test_noniso_and_duplicate_control():
    M = BaseModule(1, 0, 5, 20, simple=True)
    F = build_fgp_dual(M, None, set(), 1, 5)
    assert pairwise_noniso_check(F).passed
    bad = pairwise_noniso_check(with_duplicate_summand(F, 2))
    assert not bad.passed and bad.witness == (2, len(F))
    from drinfeld.functor import FGPModule
    single = FGPModule(M, F.V, F.table, [F.reps[0]])
    assert pairwise_noniso_check(single).passed


def test_noniso_fails_for_non_maximal_parabolic():
    M = BaseModule(2, 0, 5, 10, simple=True)
    assert not pairwise_noniso_check(build_fgp_dual(M, None, set(), 2, 5)).passed


def test_probe_line_passes_and_is_deterministic():
    M = BaseModule(1, 0, 5, 20, simple=True)
    F = build_fgp_dual(M, None, set(), 1, 5)
    a = simplicity_probe_fgp(F, 15, seed=11)
    assert a.passed and a.to_json() == simplicity_probe_fgp(F, 15, seed=11).to_json()


def test_probe_reducible_coefficients_fail():
    M = BaseModule(1, 0, 5, 20, simple=True)
    V = CharacterSum(ParabolicData(1, (1, 1)), ((0, 0), (1, 0)))
    F = build_fgp_dual(M, V, set(), 1, 5)
    assert reducible_control(F, 5, 1)["control_ok"]


def test_probe_diagonal_control_and_its_positive_twin():
    M = BaseModule(2, 0, 5, 12, simple=True)
    FB = build_fgp_dual(M, None, set(), 2, 5)
    assert diagonal_control(FB, ParabolicData(2, (1, 2)))["control_ok"]
    FP = build_fgp_dual(M, None, {1}, 2, 5)
    probe = FGPProbe(FP)
    v = M.extremal
    e = next(i for i, g in enumerate(FP.reps) if g == ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    other = next(i for i in range(len(FP)) if i != e)
    ok, _ = probe.run_trial({(e, v, 0): 1, (other, v, 0): 2})
    assert ok


def test_probe_rejects_small_characteristic():
    M = BaseModule(1, 0, 3, 10)
    F = build_fgp_dual(M, None, set(), 1, 3)
    with pytest.raises(CharacteristicError):
        simplicity_probe_fgp(F, 1, 0)


# --- exactness and transitivity ------------------------------------------------------------------

def test_exact_triples():
    for name, t in exact_triples().items():
        assert exactness_dims_check(t, set(), 1, 2)["passed"], name
    assert exact_triples()["reduced"][2].dims == {0: 1}


def test_exactness_rejects_non_exact_source():
    par = ParabolicData(1, (1, 1))
    t = (Piece({0: 1}, trivial(par)), Piece({0: 3}, trivial(par)), Piece({0: 1}, trivial(par)))
    with pytest.raises(ValueError):
        exactness_dims_check(t, set(), 1, 2)


def test_transitivity():
    dims = BaseModule(2, 0, 5, 8).graded_dims()
    r = transitivity_check(2, 2, set(), {1}, dims)
    assert r["passed"] and r["index_P"] == 21 == r["index_Q"] * r["index_Q_over_P"]
    assert transitivity_check(2, 3, {1}, {1}, dims)["passed"]
    with pytest.raises(ValueError):
        transitivity_check(2, 2, {1}, {0}, dims)
