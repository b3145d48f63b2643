from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from drinfeld.dops import (SubalgebraFamily, WeylOperator, check_binom_identity,
                           check_generation, downward_ops, euler_binomial, format_operator,
                           full_ops, membership_agreement, membership_D, parse_operator,
                           q_linearity_level, simplicity_probe, single, subalgebra_generators,
                           two_chart_oracle)
from drinfeld.monomod import MonomialModule, REDUCED, highest_weight_vector
from drinfeld.rootsys import ParabolicData

V = (0, 1)


def op(p, a, n, c=1):
    return WeylOperator.term(p, T={V: a}, y={V: n}, c=c)


@pytest.mark.parametrize("p", [5, 7])
def test_named_membership_verdicts(p):
    assert membership_D(op(p, p - 1, p)).accepted
    assert membership_D(op(p, 2, 1)).accepted
    assert not membership_D(op(p, p, 1)).accepted
    assert not membership_D(op(p, 3, 1)).accepted


@given(st.integers(0, 25), st.integers(0, 5))
def test_membership_agrees_with_two_charts(a, n):
    o = op(5, a, n)
    assert membership_D(o).accepted == two_chart_oracle(o)


def test_membership_agreement_sweep():
    r = membership_agreement(5, random_sums=50)
    assert r["passed"] and not r["disagreements"]


def test_single_variable_rule():
    # T^m y^[n] is global iff m <= n + 1 (n >= 1)
    p = 7
    for n in range(1, p + 1):
        for m in range(0, 2 * p):
            assert membership_D(op(p, m, n)).accepted == (m <= n + 1)


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("p", [5, 7])
def test_binomial_identity(n, p):
    assert check_binom_identity(n, p, 50)


def test_euler_binomial_normal_form():
    assert euler_binomial(3, 5) == op(5, 3, 3)


def test_grammar_round_trip():
    p = 5
    o = op(p, 4, 5, 2) + WeylOperator.term(p, T={(0, 2): 1}, y={(1, 2): 2})
    assert parse_operator(format_operator(o), p) == o
    assert format_operator(WeylOperator.zero(p)) == "0"
    # composition normal-orders: y T = T y + 1
    yT = parse_operator("y{(0,1)}^[1] * T{(0,1)}^1", p)
    assert yT == op(p, 1, 1) + op(p, 0, 0)
    for bad in ["", "3 * Q{(0,1)}", "y{(0,1)}^2", "T{(1,1)}^1"]:
        with pytest.raises(ValueError):
            parse_operator(bad, p)


def test_linearity_level():
    assert q_linearity_level(op(5, 4, 5)) == 25
    assert q_linearity_level(op(5, 0, 0)) == 1
    assert op(5, 1, 1).apply({single(V, 3): 1}) == {single(V, 3): 3}


def test_subalgebra_generators_are_global():
    fam = SubalgebraFamily("D(U_P^-)", ParabolicData(2, (1, 2)), 3, 5)
    gens = subalgebra_generators(fam, 5)
    assert gens and all(membership_D(g).accepted for g in gens)


def test_finite_generation_d2():
    r = check_generation(2, 0, 5, 25)
    assert r.complete and len(r.span) == len(r.region)


def test_generation_along_a_line():
    assert check_generation(2, 1, 5, 10).complete


def test_dops_probe_and_control():
    M = MonomialModule(REDUCED, 2, 5, 15)
    v = highest_weight_vector(2, 0)
    assert simplicity_probe(M, full_ops(2, 5, 15), v, 30, seed=3).passed
    # only the hyperalgebra, without the downward operators: not enough
    bad = simplicity_probe(M, [o for o in full_ops(2, 5, 15) if o not in downward_ops(2, 5, 15)],
                           v, 5, seed=0, pool=[(10, -5, -5)])
    assert not bad.passed
