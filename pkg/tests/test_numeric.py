import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from painleve_blocks.numeric import (
    HamState,
    NumericSettings,
    SingularPointError,
    TruncationTooLarge,
    algebraic_state,
    backlund,
    check_algebraic,
    compare_series_ode,
    hamiltonian,
    integrate,
    rhs,
    series_initial_state,
    series_zeta,
    zeta_form_residual,
)
from painleve_blocks.kiev import tau_series

F = Fraction
finite = st.floats(-3, 3, allow_nan=False).filter(lambda x: abs(x) > 1e-2)
states = st.builds(lambda z, a, b, c, d: HamState(z, complex(a, b), complex(c, d)),
                   st.floats(0.05, 2.0), finite, finite, finite, finite)


@pytest.mark.parametrize("sign", [1, -1])
def test_rhs_on_algebraic_solution(sign):
    z = 0.37
    dw, dp = rhs(algebraic_state(z, sign))
    assert abs(dw - sign * 0.5 / math.sqrt(z)) < 1e-14
    assert abs(dp - (-sign / (8 * z ** 1.5))) < 1e-12


def test_rhs_with_zero_momentum():
    dw, dp = rhs(HamState(0.5, 2.0, 0.0))
    assert dw == 0 and abs(dp - (2.0 - 0.25)) < 1e-15


def test_singular_and_invalid_states():
    with pytest.raises(SingularPointError):
        rhs(HamState(0.5, 0.0, 1.0))
    with pytest.raises(ValueError):
        HamState(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        NumericSettings(rtol=0)


@given(states)
def test_backlund_is_an_involution(s):
    b = backlund(backlund(s))
    assert abs(b.w - s.w) <= 1e-12 * abs(s.w)
    assert abs(b.p - s.p) <= 1e-10 * max(1.0, abs(s.p))


@given(states)
def test_backlund_shifts_hamiltonian(s):
    b = backlund(s)
    expected = s.zeta - s.p * s.w + 0.25
    assert abs(b.zeta - expected) <= 1e-9 * max(1.0, abs(expected))


@pytest.mark.parametrize("sign", [1, -1])
def test_algebraic_states_are_fixed_points(sign):
    s = algebraic_state(0.2, sign)
    b = backlund(s)
    assert abs(b.w - s.w) < 1e-15 and abs(b.p - s.p) < 1e-13


def test_reversibility():
    cfg = NumericSettings()
    s0 = algebraic_state(0.05, 1)
    s0 = HamState(0.05, s0.w * 1.01, s0.p)
    fwd = integrate(s0, 0.4, cfg)
    back = integrate(fwd.end_state(), 0.05, cfg)
    end = back.end_state()
    assert abs(end.w - s0.w) < 1e-10 and abs(end.p - s0.p) < 1e-9


def test_dense_output_satisfies_the_flow():
    cfg = NumericSettings()
    s0, _, _ = series_initial_state(F(3, 10), F(1), 0.01)
    traj = integrate(s0, 0.05, cfg)
    assert traj.complete
    h = 1e-4
    for s in np.linspace(0.2, 0.8, 5):
        z, w, p, _ = traj.at(s)
        zp, wp, pp, _ = traj.at(s + h)
        zm, wm, pm, _ = traj.at(s - h)
        dz = (zp - zm)
        dw, dp = rhs(HamState(z.real, w, p))
        assert abs((wp - wm) / dz - dw) < 1e-6 * abs(dw)
        assert abs((pp - pm) / dz - dp) < 1e-6 * abs(dp)


def test_zeta_quadrature_and_form_residual():
    s0, zeta0, _ = series_initial_state(F(3, 10), F(1), 0.01)
    traj = integrate(s0, 0.05, zeta0=zeta0)
    for z, w, p, zt in traj.rows():
        assert abs(zt - hamiltonian(z, w, p)) < 1e-10
        assert zeta_form_residual(z, w, p, zt) < 1e-10


def test_series_state_matches_zeta_derivative():
    tau = tau_series(F(3, 10), F(1), 10)
    z, h = 0.02, 1e-6
    zeta, d1, _ = series_zeta(tau, z)
    numeric = (series_zeta(tau, z + h)[0] - series_zeta(tau, z - h)[0]) / (2 * h)
    assert abs(numeric - d1) < 1e-6 * abs(d1)


@pytest.mark.parametrize("sign", [1, -1])
def test_algebraic_tau_series_state(sign):
    s0, zeta0, _ = series_initial_state(F(1, 4), F(4 * sign), 0.01)
    exact = algebraic_state(0.01, sign)
    assert abs(s0.w - exact.w) < 1e-12 and abs(s0.p - exact.p) < 1e-10
    assert abs(zeta0 - (1 / 16 - 2 * sign * 0.1)) < 1e-12


def test_truncation_refusal():
    with pytest.raises(TruncationTooLarge, match="order"):
        series_initial_state(F(3, 10), F(1), 0.5, order=4)


def test_real_path_singularity_is_reported():
    s0, zeta0, _ = series_initial_state(F(3, 10), F(1), 0.01)
    partner = integrate(backlund(s0), 0.25)
    assert not partner.complete
    assert "singularity" in partner.message
    with pytest.raises(SingularPointError):
        partner.end_state()


def test_compare_series_ode_default():
    rep = compare_series_ode(F(3, 10), F(1))
    assert rep.ok, rep.metrics
    assert rep.metrics["detour"] != 0
    assert rep.metrics["zeta_rel_dev"] <= 1e-6
    assert rep.metrics["backlund_product"] <= 1e-8
    assert rep.metrics["zeta_form_residual"] <= 1e-11
    obj = rep.to_json_obj()
    assert obj["precision"] == 53 and obj["ok"] is True


@pytest.mark.parametrize("sign", [1, -1])
def test_algebraic_check(sign):
    rep = check_algebraic(sign)
    assert rep.ok and rep.metrics["max_deviation"] <= 1e-10


def test_self_convergence():
    errs = [check_algebraic(1, cfg=NumericSettings(rtol=r, atol=r * 1e-2), bound=math.inf)
            .metrics["max_deviation"] for r in (1e-6, 1e-9, 1e-12)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-10
