"""Randomized structural checks with a recorded seed.

These are the property families of the acceptance matrix in a form the
suite can run without a test framework.  The test suite covers the same
ground again with hypothesis strategies.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import comb

from .exact import ExactScalar, simplify
from .kiev import c_ratio, tau_series
from .nsr import NSRModule
from .report import Report, stopwatch
from .series import GradedSeries, hirota
from .virasoro import VirasoroModule

DEFAULT_SEED = 20240611


def _frac(rng, span=9):
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def _scalar(rng):
    return ExactScalar(_frac(rng), _frac(rng), _frac(rng), _frac(rng))


def _sigma(rng):
    while True:
        s = Fraction(rng.randint(1, 40), rng.randint(3, 41))
        if (2 * s).denominator != 1 and s < 1:
            return s


def check_field_axioms(rng, trials):
    bad = []
    for _ in range(trials):
        x, y, z = _scalar(rng), _scalar(rng), _scalar(rng)
        if (x + y) + z != x + (y + z) or (x * y) * z != x * (y * z):
            bad.append(("assoc", x, y, z))
        if x * (y + z) != x * y + x * z or x * y != y * x:
            bad.append(("distrib/comm", x, y, z))
        if x and simplify(x * x.inverse()) != 1:
            bad.append(("inverse", x))
    return bad


def _random_series(rng, order=5):
    base = Fraction(rng.randint(0, 20), rng.randint(1, 7))
    return GradedSeries.from_list(base, [_frac(rng) for _ in range(order + 1)])


def _same(a, b) -> bool:
    return not (a - b).coeffs


def check_hirota(rng, trials):
    bad = []
    for _ in range(trials):
        f, g = _random_series(rng), _random_series(rng)
        k = rng.randint(0, 4)
        if not _same(hirota(k, 1, -1, 0, f, g), hirota(k, 1, -1, 0, g, f).scale((-1) ** k)):
            bad.append(("antisymmetry", k))
        # definition: D^k = sum_j C(k,j) (-1)^(k-j) theta^j f theta^(k-j) g
        direct = (f * g).scale(0)
        for j in range(k + 1):
            fj, gj = f, g
            for _ in range(j):
                fj = fj.euler()
            for _ in range(k - j):
                gj = gj.euler()
            direct = direct + (fj * gj).scale(comb(k, j) * (-1) ** (k - j))
        if not _same(hirota(k, 1, -1, 0, f, g), direct):
            bad.append(("definition", k))
    return bad


def check_ct_symmetries(rng, trials):
    bad = []
    for _ in range(trials):
        s = _sigma(rng)
        n = Fraction(rng.randint(-8, 8), 2)
        if c_ratio(s, n) != c_ratio(-s, -n):
            bad.append(("reflection", s, n))
        m = rng.randint(-4, 4)
        gamma = 1 / ((2 * s) ** 2 * (2 * s + 1) ** 4 * (2 * s + 2) ** 2)
        if c_ratio(s, m + 1) != c_ratio(s, 1) * gamma ** m * c_ratio(s + 1, m):
            bad.append(("shift", s, m))
    return bad


def check_window_stability(rng, trials):
    bad = []
    for _ in range(trials):
        s = _sigma(rng)
        st = Fraction(rng.randint(1, 5), rng.randint(1, 5)) * rng.choice((1, -1))
        order = rng.randint(2, 5)
        auto = tau_series(s, st, order)
        lo, hi = min(auto.window), max(auto.window)
        wide = tau_series(s, st, order, (lo - 2, hi + 2))
        if dict(auto.combined.items()) != dict(wide.combined.items()):
            bad.append(("window", s, st, order))
    return bad


def check_gram_symmetry(rng, trials):
    bad = []
    for _ in range(trials):
        c, h = _frac(rng), _frac(rng)
        level = rng.randint(1, 5)
        g = VirasoroModule(c, h).gram_matrix(level)
        if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(i)):
            bad.append(("gram", c, h, level))
    return bad


def check_tower_symmetry(rng, trials):
    bad = []
    for _ in range(trials):
        b = Fraction(rng.randint(2, 7), rng.randint(1, 3))
        P = _frac(rng)
        if not P:
            continue
        c_nsr = 1 + 2 * (b + 1 / b) ** 2
        mod = NSRModule(c_nsr, P, "r")
        if not _same(mod.block_series(2, 1), mod.block_series(2, -1)):
            bad.append(("tower", b, P))
    return bad


CHECKS = {
    "field-axioms": check_field_axioms,
    "hirota": check_hirota,
    "ct-symmetries": check_ct_symmetries,
    "window-stability": check_window_stability,
    "gram-symmetry": check_gram_symmetry,
    "tower-symmetry": check_tower_symmetry,
}


def run_property_checks(seed: int = DEFAULT_SEED, trials: int = 10) -> Report:
    results = {}
    failures = []
    with stopwatch() as sw:
        for name, fn in CHECKS.items():
            rng = random.Random(f"{seed}:{name}")
            bad = fn(rng, trials)
            results[name] = not bad
            failures.extend((name, repr(item)) for item in bad)
    return Report("properties", {"seed": seed, "trials": trials}, Fraction(0), not failures, [],
                  sw["elapsed"], notes=[f"{n}: {x}" for n, x in failures], details=results)
