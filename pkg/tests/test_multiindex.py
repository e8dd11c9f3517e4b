import functools
import itertools

import pytest
from hypothesis import given, strategies as st

from monobasis.errors import DomainError, PreconditionError
from monobasis.multiindex import (
    MultiIndex,
    compatible_rank,
    compatible_unrank,
    count_monomials,
    enumerate_monomials,
    global_key,
    iter_in_compatible_order,
    iter_monomials,
    rank,
    recursive_extend,
    square_cmp,
    stratum,
    unrank,
)

exps = st.lists(st.integers(0, 4), max_size=7)


def brute(n, k):
    return [MultiIndex(e) for e in itertools.product(range(n + 1), repeat=k) if sum(e) == n]


def test_basic_properties():
    m = MultiIndex.of(2, 0, 1, 0, 0)
    assert m.exponents == (2, 0, 1)
    assert m.degree == 3 and m.length == 3
    assert m[1] == 2 and m[2] == 0 and m[9] == 0
    assert m.support() == (1, 3)
    assert MultiIndex().length == 0 and MultiIndex().degree == 0
    with pytest.raises(DomainError):
        MultiIndex.of(1, -1)


@given(exps)
def test_json_roundtrip(e):
    m = MultiIndex(tuple(e))
    assert MultiIndex.from_json(m.to_json()) == m
    assert MultiIndex.from_sparse(m.to_sparse()) == m


def test_times_and_add():
    assert MultiIndex.of(1).times(3) == MultiIndex.of(1, 0, 1)
    assert MultiIndex.of(1, 2) + MultiIndex.of(0, 0, 1) == MultiIndex.of(1, 2, 1)


def test_square_order_examples():
    # length decides first, then the highest coordinate where exponents differ
    assert square_cmp(MultiIndex.of(3), MultiIndex.of(0, 1)) < 0
    assert square_cmp(MultiIndex.of(2, 1), MultiIndex.of(1, 2)) < 0
    assert square_cmp(MultiIndex.of(0, 2, 1), MultiIndex.of(3, 0, 1)) > 0
    assert square_cmp(MultiIndex.of(1, 1), MultiIndex.of(1, 1)) == 0


def test_enumeration_example():
    got = [m.exponents for m in enumerate_monomials(2, 3)]
    assert got == [(2,), (1, 1), (0, 2), (1, 0, 1), (0, 1, 1), (0, 0, 2)]


@pytest.mark.parametrize("n", range(1, 4))
def test_square_cmp_is_strict_total_order(n):
    ms = list(iter_monomials(n, 5))
    for a, b in itertools.product(ms, repeat=2):
        assert square_cmp(a, b) == -square_cmp(b, a)
        assert (square_cmp(a, b) == 0) == (a == b)
    for a, b, c in itertools.product(ms, repeat=3):
        if square_cmp(a, b) < 0 and square_cmp(b, c) < 0:
            assert square_cmp(a, c) < 0


@pytest.mark.parametrize("n", range(0, 7))
@pytest.mark.parametrize("k", range(0, 8))
def test_counts_match_brute_force(n, k):
    expected = brute(n, k) if k else [MultiIndex()] * (n == 0)
    assert count_monomials(n, k) == len(expected)
    got = list(iter_monomials(n, k))
    assert len(got) == len(expected)
    assert sorted(got, key=functools.cmp_to_key(square_cmp)) == got


def test_length_is_monotone_along_the_order():
    for n in range(1, 5):
        ms = list(iter_monomials(n, 6))
        assert all(a.length <= b.length for a, b in zip(ms, ms[1:]))


@pytest.mark.parametrize("n", range(1, 5))
def test_recursive_extend_matches_enumeration(n):
    bases = [stratum(n, i) for i in range(1, 7)]
    nxt = []
    for k in range(1, 7):
        nxt += recursive_extend(bases, k)
    assert nxt == list(iter_monomials(n + 1, 6))


def test_recursive_extend_preconditions():
    with pytest.raises(PreconditionError):
        recursive_extend([stratum(2, 1)], 2)
    with pytest.raises(PreconditionError):
        recursive_extend([stratum(2, 1), stratum(3, 2)], 2)
    with pytest.raises(PreconditionError):
        recursive_extend([stratum(2, 1), stratum(2, 2)[::-1]], 2)


@pytest.mark.parametrize("n,k", [(0, 3), (1, 1), (3, 4), (4, 6), (5, 2)])
def test_rank_unrank(n, k):
    basis = enumerate_monomials(n, k)
    for r, m in enumerate(basis):
        assert rank(m, k) == r
        assert basis.index(m) == r
        assert unrank(n, r, k) == m
        # the position does not depend on the length bound
        assert rank(m, k + 3) == r
    with pytest.raises(DomainError):
        unrank(n, len(basis), k)
    with pytest.raises(DomainError):
        rank(MultiIndex.of(0, 0, 0, 0, 0, 0, 0, 1), k)


def test_compatible_order_is_bijective_and_compatible():
    seen = {}
    for n in range(8):
        for r in range(8):
            g = compatible_rank(n, r)
            assert compatible_unrank(g) == (n, r)
            seen[g] = (n, r)
    assert sorted(seen)[:36] == list(range(36))
    for n in range(5):
        ms = list(iter_monomials(n, 4))
        keys = [global_key(m) for m in ms]
        assert keys == sorted(keys)
    ms = [MultiIndex.of(0, 1), MultiIndex.of(2), MultiIndex(), MultiIndex.of(1)]
    # positions 0, 2, 4, 5 under the diagonal rule
    assert iter_in_compatible_order(ms) == [MultiIndex(), MultiIndex.of(1), MultiIndex.of(0, 1), MultiIndex.of(2)]


def test_stratum():
    assert stratum(0, 0) == [MultiIndex()]
    assert stratum(2, 0) == []
    assert all(m.length == 3 and m.degree == 3 for m in stratum(3, 3))
    assert len(stratum(3, 3)) == count_monomials(2, 3)


def test_ordered_basis_json():
    b = enumerate_monomials(1, 2)
    assert b.to_json() == [{"1": 1}, {"2": 1}]
    assert len(b) == 2 and list(b) == [MultiIndex.of(1), MultiIndex.of(0, 1)]


def test_compatible_rank_windows():
    for n in range(7):
        vals = [compatible_rank(n, r) for r in range(51)]
        assert vals == sorted(set(vals))
    window = {compatible_rank(n, r) for n in range(61) for r in range(61)}
    assert len(window) == 61 * 61
    for g in range(1000):
        assert compatible_rank(*compatible_unrank(g)) == g
    with pytest.raises(DomainError):
        compatible_unrank(-1)
