from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from drinfeld.monomod import (LOCAL, REDUCED, TORUS, DividedPowerGenerator, MonomialModule,
                              TruncationOverflow, act_divided, graded_dual,
                              highest_weight_vector, iterate_oracle, local_cohomology,
                              local_cohomology_basis, reduced_cokernel_dim, reduced_part,
                              root_operator, serre_dual_basis)

roots = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda r: r[0] != r[1])


@given(roots, st.integers(1, 12), st.lists(st.integers(-10, 10), min_size=4, max_size=4),
       st.sampled_from([5, 7]))
def test_divided_power_matches_iterate_oracle(root, n, m, p):
    assert act_divided(root, n, tuple(m), p) == iterate_oracle(root, n, tuple(m), p)


def test_basis_examples():
    assert local_cohomology_basis(1, 0, 3) == [(1, -1), (2, -2), (3, -3)]
    assert highest_weight_vector(2, 0) == (2, -1, -1)
    assert highest_weight_vector(2, 1) == (0, 1, -1)
    assert (0, 1, -1) in local_cohomology_basis(2, 1, 2)
    assert all(m[2] < 0 and m[0] >= 0 and m[1] >= 0 for m in local_cohomology_basis(2, 1, 4))


def test_reduced_part_drops_serre_dual_monomials():
    M = local_cohomology(1, 0, 6, 5, twist=-2)
    assert (-1, -1) in M.basis
    R = reduced_part(M)
    assert (-1, -1) not in R.basis
    assert reduced_cokernel_dim(M) == len(serre_dual_basis(1, -2)) == 1


def test_overflow_and_quotient_relations():
    M = MonomialModule(REDUCED, 1, 5, 3)
    y = root_operator((0, 1), 1)
    with pytest.raises(TruncationOverflow):
        M.apply(y, {(3, -3): 1})
    # x lowers the pole order; X_0^0 X_1^0 is outside the support and reads as 0
    assert M.apply(root_operator((1, 0), 1), {(1, -1): 1}) == {}


def test_word_application_order():
    M = MonomialModule(TORUS, 1, 7, 6)
    gens = [root_operator((0, 1), 1), DividedPowerGenerator("h", (0, 1), 1)]
    # h first: weight of X^(1,-1) is 2, then y multiplies by m_1 = -1
    assert M.apply_word(gens, {(1, -1): 1}) == {(2, -2): (2 * -1) % 7}


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_graded_dual_is_signed_transpose(n):
    M = MonomialModule(LOCAL, 2, 5, 6)
    D = graded_dual(M)
    g = root_operator((0, 1), n)
    for m in M.basis[:40]:
        for lab, c in D.apply(g, {m: 1}).items():
            coef = M.apply(g, {lab: 1}).get(m, 0)
            assert c == (-1) ** n * coef % 5
    assert graded_dual(D) == M
