import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

import naive_virasoro as naive
from painleve_blocks.virasoro import (
    DegenerateWeightError,
    VirasoroModule,
    block_coefficients,
    block_series,
    verify_block_sanity,
)
from strategies import rationals

F = Fraction
generic = st.builds(Fraction, st.integers(1, 97), st.integers(98, 199))


def test_level_two_gram_closed_form():
    c, d = F(7, 3), F(2, 5)
    g = VirasoroModule(c, d).gram_matrix(2)
    assert g == [[4 * d + c / 2, 6 * d], [6 * d, 8 * d * d + 4 * d]]


@given(generic, generic)
def test_level_two_norm_closed_form(c, d):
    det = (4 * d + c / 2) * (8 * d * d + 4 * d) - 36 * d * d
    assert block_coefficients(c, d, 2)[2] == (4 * d + c / 2) / det
    assert block_coefficients(c, d, 2)[1] == 1 / (2 * d)


def test_block_sanity_c1():
    assert verify_block_sanity(F(9, 100)).ok
    assert block_coefficients(1, F(9, 100), 1)[1] == F(50, 9)


@pytest.mark.parametrize("c,d", [(F(1), F(9, 100)), (F(13, 7), F(-3, 11)), (F(-2, 5), F(5, 3))])
def test_against_naive_oracle(c, d):
    mine = block_coefficients(c, d, 6)
    for lv in range(7):
        assert mine[lv] == naive.block_coefficient(lv, c, d)


@given(rationals, rationals, st.integers(1, 5))
def test_gram_symmetric_and_matches_naive(c, d, level):
    g = VirasoroModule(c, d).gram_matrix(level)
    n = len(g)
    assert all(g[i][j] == g[j][i] for i in range(n) for j in range(n))
    _, ref = naive.gram(level, c, d)
    assert g == ref


@given(st.integers(2, 5), st.randoms(use_true_random=False))
def test_permuted_basis_permutes_gram(level, rnd):
    c, d = F(3, 7), F(11, 13)
    mod = VirasoroModule(c, d)
    basis = list(mod.basis(level))
    g = mod.gram_matrix(level)
    perm = basis[:]
    rnd.shuffle(perm)
    _, gp = naive.gram(level, c, d, perm)
    pos = {p: i for i, p in enumerate(basis)}
    assert all(gp[i][j] == g[pos[a]][pos[b]] for i, a in enumerate(perm) for j, b in enumerate(perm))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_kac_degenerate_c1(m):
    d = F(m * m, 4)
    g = VirasoroModule(1, d).gram_matrix(m + 1)
    assert sympy.Matrix(g).det() == 0
    # generic below the degenerate level
    assert sympy.Matrix(VirasoroModule(1, d).gram_matrix(m)).det() != 0
    with pytest.raises(DegenerateWeightError) as exc:
        block_coefficients(1, d, m + 1)
    assert exc.value.level == m + 1


@pytest.mark.parametrize("d", [F(1, 2), F(1, 16)])
def test_kac_degenerate_ising(d):
    with pytest.raises(DegenerateWeightError):
        block_coefficients(F(1, 2), d, 2)


def test_block_series_shape():
    s = block_series(1, F(1, 3), 0)
    assert s.base == F(1, 3) and s.coeffs == {F(0): F(1)}


def test_act_L_basics():
    mod = VirasoroModule(F(1), F(1, 5))
    vac = {(): F(1)}
    assert mod.act_L(0, vac) == {(): F(1, 5)}
    assert mod.act_L(1, vac) == {}
    one = mod.act_L(-1, vac)
    assert mod.act_L(1, one) == {(): F(2, 5)}
