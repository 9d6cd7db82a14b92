import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import shortlex_enumeration
from spherekernel.multiindex import (
    MultiIndex,
    alpha_of_level,
    compare,
    last_rank_of_level,
    level_of_rank,
    level_size,
    prec,
    shortlex_rank,
    shortlex_unrank,
    succ,
)


def test_compare_examples():
    assert compare((1, 0), (0, 1)) == -1
    assert compare((1, 1), (1, 1)) == 0
    assert compare((0, 2), (2, 0)) == 1


def test_compare_dimension_mismatch():
    with pytest.raises(ValueError):
        compare((1, 0), (1, 0, 0))


def test_rank_examples():
    assert shortlex_rank((0, 1)) == 2
    assert shortlex_rank((0, 0)) == 0
    assert shortlex_rank((0, 0, 2)) == 9


def test_unrank_examples():
    assert shortlex_unrank(4, 2) == MultiIndex((1, 1))
    assert shortlex_unrank(0, 5) == MultiIndex((0,) * 5)
    assert shortlex_unrank(9, 3) == MultiIndex((0, 0, 2))


def test_succ_prec_examples():
    assert succ((1, 1)) == MultiIndex((0, 2))
    assert succ((0, 2)) == MultiIndex((3, 0))
    assert prec(succ((2, 0))) == MultiIndex((2, 0))
    with pytest.raises(ValueError):
        prec((0, 0))


def test_d2_order_prefix():
    got = [shortlex_unrank(k, 2).entries for k in range(6)]
    assert got == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("d,L", [(1, 30), (2, 12), (3, 8), (4, 6)])
def test_rank_matches_enumeration(d, L):
    order = shortlex_enumeration(d, L)
    for k, a in enumerate(order):
        assert shortlex_rank(a) == k
        assert shortlex_unrank(k, d).entries == a


def test_invalid_entries():
    with pytest.raises(ValueError):
        MultiIndex((1, -1))
    with pytest.raises(ValueError):
        MultiIndex(())


def test_factorial_and_length_large():
    a = MultiIndex((20, 10, 5, 5))
    assert a.length == 40
    assert a.factorial() == math.factorial(20) * math.factorial(10) * math.factorial(5) ** 2


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_level_counts(d):
    total = 0
    for ell in range(8):
        total += level_size(ell, d)
        assert last_rank_of_level(ell, d) + 1 == total
        assert shortlex_unrank(last_rank_of_level(ell, d), d) == alpha_of_level(ell, d)
        assert level_of_rank(last_rank_of_level(ell, d), d) == ell


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10_000), st.integers(0, 10_000))
def test_compare_agrees_with_rank(d, m, n):
    a, b = shortlex_unrank(m, d), shortlex_unrank(n, d)
    assert compare(a, b) == (m > n) - (m < n)
    assert shortlex_rank(a) == m


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda d: st.lists(st.integers(0, 9), min_size=d, max_size=d)))
def test_rank_unrank_roundtrip(entries):
    a = MultiIndex(entries)
    assert shortlex_unrank(shortlex_rank(a), a.d) == a
    assert prec(succ(a)) == a
