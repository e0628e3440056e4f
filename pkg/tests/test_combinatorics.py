from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.utilities.iterables import partitions as sympy_partitions

from painleve_blocks.combinatorics import (
    ModeSet,
    Partition,
    hook_lengths,
    nsr_basis,
    partitions_of,
    staircase_hook_product,
    strict_mode_sets,
)


def poly_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def one_plus(k, n):
    # 1 + q^k
    f = [0] * (n + 1)
    f[0] = 1
    if k <= n:
        f[k] += 1
    return f


def geometric(k, n):
    # 1 / (1 - q^k)
    return [1 if i % k == 0 else 0 for i in range(n + 1)]


def product(factors, n):
    acc = [1] + [0] * n
    for f in factors:
        acc = poly_mul(acc, f, n)
    return acc


def test_partition_counts_vs_generating_function():
    want = product([geometric(k, 15) for k in range(1, 16)], 15)
    assert [len(partitions_of(n)) for n in range(16)] == want


@given(st.integers(0, 14))
def test_partitions_match_sympy(n):
    ours = sorted(tuple(p) for p in partitions_of(n))
    theirs = sorted(
        tuple(sorted((k for k, m in p.items() for _ in range(m)), reverse=True))
        for p in sympy_partitions(n)
    ) if n else [()]
    assert ours == theirs


def test_reverse_lexicographic_order():
    assert [tuple(p) for p in partitions_of(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_nsr_dimensions():
    ns = [len(nsr_basis("ns", Fraction(k, 2))) for k in range(10)]
    assert ns == [1, 1, 1, 2, 3, 4, 5, 7, 10, 13]
    # both towers are listed; per tower the counts are
    r = [len(nsr_basis("r", k)) // 2 for k in range(8)]
    assert r == [1, 2, 4, 8, 14, 24, 40, 64]


def test_nsr_dimensions_vs_generating_function():
    # NS in q = t^(1/2): prod (1 + t^r) / (1 - t^n) over half-odd r and integer n
    want_ns = product([one_plus(2 * j + 1, 16) for j in range(9)]
                      + [geometric(2 * n, 16) for n in range(1, 9)], 16)
    assert [len(nsr_basis("ns", Fraction(k, 2))) for k in range(17)] == want_ns
    # R: two towers times prod (1 + q^n) / (1 - q^n)
    want_r = product([one_plus(n, 8) for n in range(1, 9)]
                     + [geometric(n, 8) for n in range(1, 9)], 8)
    assert [len(nsr_basis("r", k)) for k in range(9)] == [2 * x for x in want_r]


def test_r_half_levels_rejected():
    with pytest.raises(ValueError):
        nsr_basis("r", Fraction(1, 2))


def test_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        ModeSet((Fraction(1, 2), Fraction(1, 2)))


def test_hook_lengths_known():
    assert sorted(hook_lengths((3, 1))) == [1, 1, 2, 4]
    assert [staircase_hook_product(k) for k in range(5)] == [1, 1, 3, 45, 4725]


@given(st.integers(1, 9))
def test_hook_formula_counts_tableaux(n):
    # sum over partitions of (n!/prod hooks)^2 = n!
    total = 0
    fact = sympy.factorial(n)
    for p in partitions_of(n):
        prod = 1
        for h in hook_lengths(p):
            prod *= h
        total += (fact / prod) ** 2
    assert total == fact


def test_strict_mode_sets():
    sets = strict_mode_sets(Fraction(3), Fraction(1, 2))
    assert sorted(sets) == sorted([(Fraction(5, 2), Fraction(1, 2))])
