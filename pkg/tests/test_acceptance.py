"""Acceptance matrix: one PASS/FAIL line per criterion, tolerances as specified.

Each test prints its line immediately and the full list is repeated in the
terminal summary.  Time budgets are asserted alongside correctness.
"""
import time
from fractions import Fraction

import mpmath
import pytest

from painleve_blocks.blowup import EmbeddingParams, verify_hatf, verify_okamoto_r, verify_todablock
from painleve_blocks.kiev import (
    c_ratio,
    tau_series,
    verify_backlund_profd,
    verify_blockquarter,
    verify_bridge,
    verify_hook_bn,
    verify_okamoto_c1,
    verify_tau3,
    verify_toda_c1,
)
from painleve_blocks.numeric import NumericSettings, check_algebraic, compare_series_ode, convergence_study
from painleve_blocks.properties import DEFAULT_SEED, run_property_checks
from painleve_blocks.virasoro import block_coefficients, verify_block_sanity

F = Fraction
SIGMAS = (F(3, 10), F(3, 7), F(5, 13))
BLOWUP_POINTS = ((F(2), F(3, 7)), (F(3, 2), F(1, 5)))

LINES = []


@pytest.fixture
def line(capsys):
    def emit(criterion, ok, text, elapsed):
        msg = f"ACCEPTANCE {criterion:<3} {'PASS' if ok else 'FAIL'}  {text}  ({elapsed:.2f}s)"
        LINES.append(msg)
        with capsys.disabled():
            print("\n" + msg, end="")
    return emit


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def test_criterion_01_block_sanity(line):
    def run():
        rep = verify_block_sanity()
        s = F(3, 10)
        a = block_coefficients(1, s * s, 2)
        tau = dict(tau_series(s, 1, 1).combined.items())
        d = s * s
        return (rep.ok and a[1] == 1 / (2 * d) and tau[d + 1] == 1 / (2 * s * s)
                and a[2] == (8 * d + 1) / (4 * d * (4 * d - 1) ** 2))
    ok, t = _timed(run)
    line(1, ok and t < 1, "a1 = 1/(2 delta), a2 at c=1 exact, < 1 s", t)
    assert ok and t < 1


def test_criterion_02_tau3(line):
    reps, t = _timed(lambda: [verify_tau3(s, 8, (-1, 0, 1, 2)) for s in SIGMAS])
    ok = all(r.ok for r in reps)
    line(2, ok and t < 120, "tau-form ODE residual zero, m in {-1,0,1,2}, order 8, 3 sigmas", t)
    assert ok, [r.residual_exponents for r in reps]
    assert t < 120


def test_criterion_03_toda(line):
    reps, t = _timed(lambda: [verify_toda_c1(s, 8, (0, 1)) for s in SIGMAS])
    ok = all(r.ok for r in reps)
    line(3, ok and t < 60, "Toda-like m = 0,1 zero through order 8", t)
    assert ok and t < 60


def test_criterion_04_okamoto(line):
    reps, t = _timed(lambda: [verify_okamoto_c1(s, 8) for s in SIGMAS])
    ok = all(r.ok for r in reps)
    line(4, ok and t < 60, "Okamoto-like m = 0 zero through order 8", t)
    assert ok and t < 60


def test_criterion_05_algebraic_solution(line):
    reps, t = _timed(lambda: [verify_blockquarter(1, 5), verify_blockquarter(-1, 5), verify_hook_bn(4)])
    ok = all(r.ok for r in reps)
    line(5, ok and t < 30, "both signs through z^(1/16+5), B_n = (l_n^+)^2 for |n| <= 4", t)
    assert ok and t < 30


def test_criterion_06_ns_blowup(line):
    def run():
        out = []
        for b, P in BLOWUP_POINTS:
            p = EmbeddingParams(b, P)
            out += [verify_todablock(p, 6), verify_hatf(p, "ns", 4)]
        return out
    reps, t = _timed(run)
    ok = all(r.ok for r in reps)
    line(6, ok and t < 300, "NS blowup order 6 and F_hat_0, F_hat_2 order 4 at 2 points", t)
    assert ok and t < 300


def test_criterion_07_ramond_relations(line):
    reps, t = _timed(lambda: [verify_okamoto_r(EmbeddingParams(b, P), 10, F(9, 4))
                              for b, P in BLOWUP_POINTS])
    ok = all(r.ok for r in reps)
    line("7a", ok and t < 900, "R-sector relations, |n| <= 9/4, order 10", t)
    assert ok and t < 900


def test_criterion_07_ramond_hatf(line):
    reps, t = _timed(lambda: [verify_hatf(EmbeddingParams(b, P), "r", 4) for b, P in BLOWUP_POINTS])
    ok = all(r.ok for r in reps)
    line("7b", ok, "R-sector F_hat'_0 = z^(1/16) F_R, F_hat'_1 = -(iP/2) z^(1/16) F_R, order 4", t)
    assert ok, [(r.params, r.residual_exponents[:3]) for r in reps]


def test_criterion_07_extension(line):
    reps, t = _timed(lambda: [verify_okamoto_r(EmbeddingParams(b, P), 14, F(11, 4))
                              for b, P in BLOWUP_POINTS])
    ok = all(r.ok for r in reps)
    finding = "zero" if ok else f"nonzero residual (finding): {[r.residual_exponents[:3] for r in reps]}"
    line("7x", True, f"extension run executed and recorded: {finding}", t)


def test_criterion_08_backlund(line):
    reps, t = _timed(lambda: [verify_backlund_profd(F(3, 10), 1, 6), verify_backlund_profd(F(3, 7), 2, 6)])
    ok = all(r.ok for r in reps)
    line(8, ok and t < 120, "zeta' zeta_1' = z through order 6 at 2 points", t)
    assert ok and t < 120


def _barnes_ratio(s, n):
    mpmath.mp.dps = 30

    def big_c(x):
        return 1 / (mpmath.barnesg(1 - 2 * x) * mpmath.barnesg(1 + 2 * x))

    sf = mpmath.mpf(s.numerator) / s.denominator
    return big_c(sf + n) * big_c(sf - n) / big_c(sf) ** 2


def _mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


def test_criterion_09_bridge(line):
    def run():
        exact = [verify_bridge(s, 6) for s in (F(3, 10), F(3, 7))]
        # second route: Barnes G numerically against the exact structure constants
        worst = max(
            abs(_barnes_ratio(s, mpmath.mpf(k) / 2)
                / _mp(c_ratio(s, F(k, 2)) * c_ratio(s, F(-k, 2))) - 1)
            for s in (F(3, 10), F(3, 7)) for k in range(1, 7)
        )
        return exact, worst
    (reps, worst), t = _timed(run)
    ok = all(r.ok for r in reps) and worst < 1e-20
    line(9, ok and t < 10, f"bridge exact for 2n = 1..6, Barnes G route rel. dev {float(worst):.1e}", t)
    assert ok and t < 10


def test_criterion_10_numeric(line):
    def run():
        cmp = compare_series_ode(F(3, 10), F(1), 0.01, 0.25, NumericSettings(rtol=1e-12))
        alg = [check_algebraic(s, 0.01, 1.0, bound=1e-10) for s in (1, -1)]
        return cmp, alg
    (cmp, alg), t = _timed(run)
    m = cmp.metrics
    ok = (cmp.ok and m["zeta_rel_dev"] <= 1e-6 and m["backlund_product"] <= 1e-8
          and m["zeta_form_residual"] <= 10 * 1e-12 and all(a.ok for a in alg))
    line(10, ok and t < 60,
         f"zeta dev {m['zeta_rel_dev']:.1e}, |w w1 - z| {m['backlund_product']:.1e}, "
         f"zeta-form {m['zeta_form_residual']:.1e}, sqrt z dev "
         f"{max(a.metrics['max_deviation'] for a in alg):.1e}", t)
    assert ok and t < 60


def test_criterion_10_bound_from_convergence_study(line):
    study, t = _timed(lambda: convergence_study(rtols=(1e-8, 1e-12), orders=(12,)))
    order12 = study["series"][0]["zeta_rel_dev"]
    slope_ok = study["algebraic"][1]["max_deviation"] < study["algebraic"][0]["max_deviation"]
    ok = order12 <= 1e-6 and slope_ok
    line(10, ok, f"convergence study: order 12 zeta dev {order12:.1e} within the 1e-6 bound", t)
    assert ok


def test_criterion_11_properties(line):
    rep, t = _timed(lambda: run_property_checks(DEFAULT_SEED))
    line(11, rep.ok and t < 120, f"property families all pass, seed {DEFAULT_SEED}", t)
    assert rep.ok, rep.notes
    assert t < 120


