from __future__ import annotations

import random

import pytest

from drinfeld.halfspace import (act_on_arrangement, arrangement, multiplication_injective,
                                predicted_graded_dims, predicted_total, reconcile_filtration,
                                sections_dims, sections_formula, sections_rank_oracle, serre_h)
from drinfeld.scalars import GF


@pytest.mark.parametrize("d,q,N", [(1, 2, 3), (2, 2, 7), (1, 3, 4), (1, 4, 5), (2, 3, 13)])
def test_arrangement_counts(d, q, N):
    arr = arrangement(d, q)
    assert arr.N == N
    assert all(next(x for x in a if x) == 1 for a in arr.normals)


@pytest.mark.parametrize("d,q", [(1, 3), (2, 2), (1, 4)])
def test_group_permutes_the_arrangement(d, q):
    F = GF(q)
    arr = arrangement(d, q)
    rng = random.Random(q)
    for _ in range(10):
        while True:
            g = tuple(tuple(rng.randrange(q) for _ in range(d + 1)) for _ in range(d + 1))
            from drinfeld.fingrp import is_invertible
            if is_invertible(F, g):
                break
        assert act_on_arrangement(arr, g) == arr.normals


def test_section_dims_examples():
    assert sections_dims(1, 2, 0, 5) == [1, 4, 7, 10, 13, 16]
    assert sections_dims(1, 3, 0, 2)[2] == 9
    assert sections_dims(1, 2, -5, 1, oracle="formula") == [0, 0]


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("m", [-1, 0, 1, 2])
def test_rank_oracle_matches_riemann_roch(q, m):
    N = q + 1
    for k in range(0, 6):
        assert sections_rank_oracle(q, m, k) == max(m + k * N + 1, 0) == sections_formula(1, N, m, k)


def test_rank_oracle_domain():
    with pytest.raises(ValueError):
        sections_dims(1, 2, -2, 3, oracle="rank")
    with pytest.raises(ValueError):
        sections_dims(2, 2, 0, 3, oracle="rank")


@pytest.mark.parametrize("d,q,m,k", [(1, 2, 0, 3), (1, 3, 1, 2), (2, 2, 0, 1), (2, 3, 1, 0)])
def test_transition_maps_are_injective(d, q, m, k):
    assert multiplication_injective(d, q, m, k)


def test_predictions():
    assert predicted_graded_dims(1, 2, 0, 0, 4, "A") == [0, 3, 6, 9, 12]
    assert serre_h(1, 1, 0) == 0
    assert predicted_total(2, 2, 0, 0, "A") == [1]
    assert serre_h(2, 0, 3) == 10
    with pytest.raises(ValueError):
        predicted_graded_dims(1, 2, 0, 1, 3, "A")
    with pytest.raises(ValueError):
        predicted_graded_dims(1, 2, 0, 0, 3, "C")


def test_four_term_sequence_on_the_line():
    """dim H^0(X)_k - dim H^0(P^1) = dim (H^1_Y)_k - dim H^1(P^1)."""
    for q in (2, 3):
        for m in (-2, 0, 1):
            lhs = sections_dims(1, q, m, 6, oracle="formula")
            local = predicted_graded_dims(1, q, m, 0, 6, "A")
            for k in range(1, 7):
                # the local piece already carries v^G (x) H^1, i.e. H^1_Y minus H^1
                assert lhs[k] - serre_h(1, 0, m) == local[k]


def test_reconciliation_line():
    r = reconcile_filtration(1, (2, 3, 5), (0, 1), 10)
    assert r.winner == "A"
    assert all(row["match_conventionA"] for row in r.rows)
    assert not any(row["match_conventionB"] for row in r.rows if row["k"] > 0)
    head = r.to_csv().splitlines()[0]
    assert head == ("d,q,m,k,lhs_dim,rhs_dim_conventionA,rhs_dim_conventionB,"
                    "match_conventionA,match_conventionB")


def test_reconciliation_plane_is_reported():
    r = reconcile_filtration(2, (2,), (0,), 4)
    assert len(r.rows) == 5 and r.rows[0]["match_conventionA"]
    assert r.winner is None
