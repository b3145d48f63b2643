from __future__ import annotations

import random

import pytest

from drinfeld.fingrp import (GF, bruhat_count, coset_table, enumerate_group,
                             generalized_steinberg_dim, group_order, in_parabolic, is_invertible,
                             lower_monomial_lower, mat_mul, parabolic_action_on_localcohomology,
                             steinberg_alternating, steinberg_dim)
from drinfeld.monomod import local_cohomology_basis
from drinfeld.rootsys import ParabolicData


@pytest.mark.parametrize("d,q,order", [(1, 2, 6), (1, 3, 48), (2, 2, 168)])
def test_group_orders(d, q, order):
    assert len(enumerate_group(d, q)) == group_order(d, q) == order


@pytest.mark.parametrize("d,q", [(1, 2), (1, 3), (2, 2), (2, 3), (1, 4)])
def test_coset_tables_match_bruhat_counts(d, q):
    for bits in range(2 ** d):
        sub = frozenset(k for k in range(d) if bits >> k & 1)
        t = coset_table(d, q, sub)
        assert len(t) == bruhat_count(t.par, q)
        F = GF(q)
        rng = random.Random(bits)
        for _ in range(10):
            g = random_invertible(F, d + 1, rng)
            i = rng.randrange(len(t))
            k, pe = t.act(g, i)
            assert in_parabolic(pe, t.par)
            assert mat_mul(F, t.reps[k], pe) == mat_mul(F, g, t.reps[i])


def random_invertible(F, n, rng):
    while True:
        g = tuple(tuple(rng.randrange(F.q) for _ in range(n)) for _ in range(n))
        if is_invertible(F, g):
            return g


def random_parabolic(F, par, rng):
    n = par.d + 1
    while True:
        g = tuple(tuple(rng.randrange(F.q) if par.block_of[c] <= par.block_of[r] else 0
                        for c in range(n)) for r in range(n))
        if is_invertible(F, g):
            return g


def test_steinberg_dimensions():
    assert steinberg_dim(2, 3) == steinberg_alternating(2, 3) == 3
    assert steinberg_dim(3, 2) == steinberg_alternating(3, 2) == 8
    assert generalized_steinberg_dim((1, 1), 2) == 2
    assert generalized_steinberg_dim((1, 1, 1), 2) == 8
    assert generalized_steinberg_dim((2, 1), 2) == 6


def test_bruhat_factorization():
    F = GF(5)
    rng = random.Random(1)
    for _ in range(30):
        g = random_invertible(F, 3, rng)
        L1, M, L2 = lower_monomial_lower(F, g)
        assert mat_mul(F, mat_mul(F, L1, M), L2) == g
        assert all(sum(1 for x in r if x) == 1 for r in M)


@pytest.mark.parametrize("d,j", [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1)])
def test_substitution_action_is_a_homomorphism(d, j):
    p = 5
    F = GF(p)
    par = ParabolicData(d, (j + 1, d - j))
    rng = random.Random(d * 10 + j)
    basis = local_cohomology_basis(d, j, 3)
    for _ in range(8):
        g, h = random_parabolic(F, par, rng), random_parabolic(F, par, rng)
        v = {rng.choice(basis): 1}
        lhs = parabolic_action_on_localcohomology(
            g, parabolic_action_on_localcohomology(h, v, d, j, p), d, j, p)
        rhs = parabolic_action_on_localcohomology(mat_mul(F, g, h), v, d, j, p)
        assert lhs == rhs


def test_action_rejects_elements_outside_the_parabolic():
    with pytest.raises(ValueError):
        parabolic_action_on_localcohomology(((1, 1), (0, 1)), (1, -1), 1, 0, 5)


def test_coset_csv():
    text = coset_table(1, 2, set()).to_csv()
    assert text.splitlines()[0] == "index,g00,g01,g10,g11"
    assert len(text.splitlines()) == 4
