from __future__ import annotations

from math import factorial

import pytest
from hypothesis import given, strategies as st

from drinfeld.rootsys import (ParabolicData, Root, act, act_root, ad_weyl_on_generator,
                              compose, composition_to_subset, coroot_pairing, dot_action,
                              identity, inverse, length, local_cohomology_highest_weight,
                              maximal_parabolic_for, minimal_coset_reps, positive_roots,
                              simple_reflection, subset_to_composition, weyl_coset_data, word)

perms = st.integers(1, 4).flatmap(lambda d: st.permutations(list(range(d + 1))).map(tuple))


def test_roots_and_heights():
    d = 3
    pos = positive_roots(d)
    assert len(pos) == d * (d + 1) // 2
    assert all(r.height > 0 for r in pos)
    assert Root(2, 0).negate() == Root(0, 2)
    assert coroot_pairing((1, -1), (1, 0)) == -2


def test_highest_weights_along_subspaces():
    assert local_cohomology_highest_weight(1, 0) == (1, -1)
    assert local_cohomology_highest_weight(2, 0) == (2, -1, -1)
    assert local_cohomology_highest_weight(2, 1) == (0, 1, -1)


@given(perms, perms)
def test_action_is_a_group_action(u, v):
    if len(u) != len(v):
        return
    lam = tuple(range(10, 10 + len(u)))
    assert act(compose(u, v), lam) == act(u, act(v, lam))
    assert compose(u, inverse(u)) == identity(len(u) - 1)


@given(perms)
def test_dot_action_of_inverse(w):
    lam = tuple(range(len(w)))
    assert dot_action(inverse(w), dot_action(w, lam)) == lam


def test_simple_reflection_lengths():
    for d in range(1, 4):
        for k in range(1, d + 1):
            assert length(simple_reflection(k, d)) == 1
    assert length(word([1, 2, 1], 2)) == 3


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_coset_counts_and_round_trip(d):
    for bits in range(2 ** d):
        sub = frozenset(k for k in range(d) if bits >> k & 1)
        comp = subset_to_composition(sub, d)
        assert composition_to_subset(comp) == sub
        par = ParabolicData(d, comp)
        levi = 1
        for c in comp:
            levi *= factorial(c)
        assert len(minimal_coset_reps(par)) * levi == factorial(d + 1)


def test_maximal_parabolics():
    assert maximal_parabolic_for((0, 0, -1)).composition == (2, 1)
    assert maximal_parabolic_for((1, -1)).composition == (1, 1)
    assert maximal_parabolic_for((2, -1, -1)).composition == (1, 2)


def test_weyl_coset_data_line():
    assert weyl_coset_data(set(), 1) == [((0, 1), []), ((1, 0), [Root(1, 0)])]


def test_weyl_transport_of_generators():
    s = simple_reflection(1, 1)
    assert ad_weyl_on_generator(s, "y", (1, 0), 3) == (1, ("x", Root(1, 0), 3))
    assert act_root(s, (0, 1)) == (1, 0)
    with pytest.raises(ValueError):
        ad_weyl_on_generator(s, "y", (0, 1), 1)


def test_parabolic_roots_partition():
    par = ParabolicData(3, (2, 2))
    n_levi = len(par.levi_roots())
    n_rad = len(par.radical_roots())
    assert n_levi + 2 * n_rad == 12
    assert all(par.contains(r) for r in par.radical_roots())
    assert not any(par.contains(r) for r in par.opposite_radical_roots())
    with pytest.raises(ValueError):
        ParabolicData(2, (1, 1))
