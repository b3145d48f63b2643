from __future__ import annotations

from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from drinfeld.scalars import (GF, CharacteristicError, divided_multinomial, fe, inv_mod,
                              is_prime, lucas_binom, prime_power, require_p_gt_3)


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(7) == (7, 1)
    with pytest.raises(ValueError):
        prime_power(6)
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


@given(st.integers(-60, 200), st.integers(0, 60), st.sampled_from([2, 3, 5, 7]))
def test_lucas_matches_big_integers(m, n, p):
    if m >= 0:
        want = comb(m, n) % p
    else:
        want = (-1) ** n * comb(n - m - 1, n) % p
    assert lucas_binom(m, n, p) == want


@given(st.lists(st.integers(0, 12), min_size=1, max_size=4), st.sampled_from([5, 7]))
def test_divided_multinomial(parts, p):
    want = factorial(sum(parts))
    for k in parts:
        want //= factorial(k)
    assert divided_multinomial(parts, p) == want % p


def test_p_gt_3_guard():
    require_p_gt_3(5)
    for p in (2, 3):
        with pytest.raises(CharacteristicError, match="p > 3"):
            require_p_gt_3(p)


@pytest.mark.parametrize("q", [2, 4, 5, 8, 9])
def test_field_axioms(q):
    F = GF(q)
    els = list(F.elements())
    assert len(els) == q
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    # multiplicative group is cyclic of order q - 1
    assert any(len({pow_el(F, g, k) for k in range(q - 1)}) == q - 1 for g in els if g)


def pow_el(F, a, k):
    out = 1
    for _ in range(k):
        out = F.mul(out, a)
    return out


def test_field_elements_and_inverse():
    a = fe(3, 7)
    assert int(a * fe(5, 7)) == 1
    assert inv_mod(3, 7) == 5
    with pytest.raises(ZeroDivisionError):
        inv_mod(0, 7)
