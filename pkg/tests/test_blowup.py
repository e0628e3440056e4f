from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from painleve_blocks.blowup import (
    EmbeddingParams,
    ResonantMomentumError,
    fhat,
    injected_fault,
    ladder,
    ln_squared_ns,
    ln_squared_r,
    verify_hatf,
    verify_okamoto_r,
    verify_todablock,
)
from painleve_blocks.exact import I
from painleve_blocks.nsr import DegenerateMomentumError
from painleve_blocks.virasoro import DegenerateWeightError

F = Fraction
bs = st.builds(Fraction, st.integers(2, 7), st.integers(1, 3)).filter(lambda b: b * b != 1)
momenta = st.builds(Fraction, st.integers(1, 12), st.integers(2, 13))
SKIP = (ResonantMomentumError, DegenerateMomentumError, DegenerateWeightError)


@given(bs, momenta)
def test_central_charges_add_up(b, P):
    p = EmbeddingParams(b, P)
    assert p.c1 + p.c2 == F(1, 2) + F(3, 2) * p.c_nsr
    assert p.cross1 == -p.cross2 == P * b / (1 - b * b)


@given(bs, momenta, st.integers(-6, 6))
def test_ladder_sum_rule(b, P, twice_n):
    p = EmbeddingParams(b, P)
    n = F(twice_n, 2)
    assert p.delta1(n) + p.delta2(n) == p.delta_ns + 2 * n * n


def test_parameter_validation():
    with pytest.raises(ValueError):
        EmbeddingParams(1, F(1, 3))
    with pytest.raises(ValueError):
        EmbeddingParams(1 + I, F(1, 3))
    EmbeddingParams(I * 2, F(1, 3))


def test_ladders():
    assert ladder("ns", 2) == [-1, F(-1, 2), 0, F(1, 2), 1]
    assert ladder("r", 1) == [F(-3, 4), F(-1, 4), F(1, 4), F(3, 4)]
    assert ladder("r", 10, F(9, 4))[-1] == F(9, 4)
    with pytest.raises(ValueError):
        ladder("x", 1)


def test_ln_normalizations():
    p = EmbeddingParams(2, F(3, 7))
    assert ln_squared_ns(p, 0).value == 1
    assert ln_squared_r(p, F(1, 4)).value == ln_squared_r(p, F(-1, 4)).value == F(1, 2)
    with pytest.raises(ValueError):
        ln_squared_ns(p, F(1, 4))
    with pytest.raises(ValueError):
        ln_squared_r(p, F(1, 2))


@settings(max_examples=15)
@given(bs, momenta)
def test_ns_bilinear_relation_random_points(b, P):
    try:
        rep = verify_todablock(EmbeddingParams(b, P), 4)
    except SKIP:
        assume(False)
    assert rep.ok, rep.residuals[:2]


@settings(max_examples=8)
@given(bs, momenta)
def test_ramond_relations_random_points(b, P):
    try:
        rep = verify_okamoto_r(EmbeddingParams(b, P), 5)
    except SKIP:
        assume(False)
    assert rep.ok, rep.residuals[:2]


@settings(max_examples=10)
@given(bs, momenta)
def test_hatf_ns_random_points(b, P):
    try:
        rep = verify_hatf(EmbeddingParams(b, P), "ns", 3)
    except SKIP:
        assume(False)
    assert rep.ok


def test_hatf_r_measured_identities():
    # the dilated block and the zero-mode matrix element reproduce both Hirota sums
    rep = verify_hatf(EmbeddingParams(2, F(3, 7)), "r", 4)
    assert all(rep.details["diagnostics"].values())
    assert rep.details["F'1_leading_ratio"] == F(3, 14)


def test_injected_sign_fault_is_caught():
    p = EmbeddingParams(2, F(3, 7))
    assert verify_todablock(p, 3).ok
    with injected_fault("l2-sign"):
        bad = verify_todablock(p, 3)
    assert not bad.ok
    # n = 1/2 first enters at relative order 2 n^2 = 1/2
    assert min(bad.residual_exponents) == p.delta_ns + F(1, 2)
    assert verify_todablock(p, 3).ok
    with pytest.raises(ValueError):
        with injected_fault("nope"):
            pass


def test_window_changes_only_far_terms():
    p = EmbeddingParams(F(3, 2), F(1, 5))
    full = fhat(p, "ns", 0, order=3)
    cut = fhat(p, "ns", 0, order=3, window=1)
    assert full == cut  # |n| <= 1 already covers 2 n^2 <= 3
