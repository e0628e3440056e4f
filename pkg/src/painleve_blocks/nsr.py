"""Super-Virasoro (NSR) Verma modules in the Neveu-Schwarz and Ramond sectors.

A basis monomial is ``(lam, mu, tower)`` standing for
``L_{-lam_1}...L_{-lam_k} G_{-mu_1}...G_{-mu_j} |h, tower>`` with ``lam`` a
partition, ``mu`` a strictly decreasing set of fermionic modes and
``tower`` equal to ``+1``/``-1`` in the Ramond sector (``0`` in NS).

Relations used:

* ``[L_m, L_n] = (m-n) L_{m+n} + c/8 (m^3 - m) delta_{m+n}``
* ``{G_r, G_s} = 2 L_{r+s} + c/2 (r^2 - 1/4) delta_{r+s}``
* ``[L_m, G_r] = (m/2 - r) G_{m+r}``
* Ramond zero mode: ``G_0 |h, +-> = g0 |h, -+>`` with ``g0 = -i P / sqrt 2``.
"""
from __future__ import annotations

from fractions import Fraction

from .combinatorics import BasisIndex, nsr_basis
from .exact import ExactScalar, as_scalar, simplify
from .linalg import SingularMatrixError, solve
from .series import GradedSeries

__all__ = ["NSRModule", "DegenerateMomentumError", "nsr_weight", "zero_mode_scalar"]

HALF = Fraction(1, 2)


class DegenerateMomentumError(ArithmeticError):
    """Singular Gram matrix: the momentum is non-generic."""


def _sector(sector: str) -> str:
    s = sector.lower()
    if s not in ("ns", "r"):
        raise ValueError(f"unknown sector {sector!r} (expected 'ns' or 'r')")
    return s


def nsr_weight(c_nsr, P, sector: str):
    """Highest weight from central charge and momentum.

    ``h = (1 - 2 delta)/16 + (Q^2/4 - P^2)/2`` with ``c = 1 + 2 Q^2`` and
    ``delta = 1/2`` (NS) or ``0`` (R).
    """
    c_nsr, P = as_scalar(c_nsr), as_scalar(P)
    qsq = (c_nsr - 1) / 2
    shift = Fraction(1, 16) if _sector(sector) == "r" else Fraction(0)
    return simplify(shift + (qsq / 4 - P * P) / 2)


def zero_mode_scalar(P):
    """``-i P / sqrt 2``, the eigen-swap scalar of ``G_0`` on Ramond vacua."""
    P = as_scalar(P)
    return simplify(ExactScalar(0, 0, 0, -HALF) * P)


class NSRModule:
    """Verma module of the NSR algebra for given ``c_nsr``, momentum and sector."""

    def __init__(self, c_nsr, P, sector: str):
        self.sector = _sector(sector)
        self.c = simplify(as_scalar(c_nsr))
        self.P = simplify(as_scalar(P))
        self.delta = nsr_weight(self.c, self.P, self.sector)
        self.g0 = zero_mode_scalar(self.P) if self.sector == "r" else None
        self._memo: dict = {}
        self._grams: dict = {}

    # -- generator action ---------------------------------------------
    @staticmethod
    def _add(res, key, val):
        if not val:
            return
        w = res.get(key, 0) + val
        if w:
            res[key] = w
        else:
            res.pop(key, None)

    def _check_mode(self, kind, m):
        m = Fraction(m)
        if kind == "L" and m.denominator != 1:
            raise ValueError(f"L modes are integers, got {m}")
        if kind == "G":
            grid_ok = (m - HALF).denominator == 1 if self.sector == "ns" else m.denominator == 1
            if not grid_ok:
                raise ValueError(f"G_{m} is not on the {self.sector.upper()} grid")
        return m

    def _apply(self, kind, m, mono):
        key = (kind, m, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        lam, mu, tower = mono
        res: dict = {}
        add = self._add
        c = self.c
        if lam:
            k0, rest = lam[0], (lam[1:], mu, tower)
            if kind == "L" and m < 0 and -m >= k0:
                add(res, ((int(-m),) + lam, mu, tower), 1)
            else:
                # X L_{-k0} rest = L_{-k0} X rest + [X, L_{-k0}] rest
                for nu, v in self._apply(kind, m, rest).items():
                    for nu2, v2 in self._apply("L", -k0, nu).items():
                        add(res, nu2, v * v2)
                if kind == "L":
                    if m + k0:
                        for nu, v in self._apply("L", m - k0, rest).items():
                            add(res, nu, (m + k0) * v)
                    if m == k0:
                        add(res, rest, c * Fraction(int(m) ** 3 - int(m), 8))
                else:
                    # G_r L_{-k} = L_{-k} G_r + (r + k/2) G_{r-k}
                    coef = m + Fraction(k0, 2)
                    if coef:
                        for nu, v in self._apply("G", m - k0, rest).items():
                            add(res, nu, coef * v)
        elif mu:
            g0, rest = mu[0], ((), mu[1:], tower)
            if kind == "L":
                if m < 0:
                    add(res, ((int(-m),), mu, tower), 1)
                else:
                    for nu, v in self._apply("L", m, rest).items():
                        for nu2, v2 in self._apply("G", -g0, nu).items():
                            add(res, nu2, v * v2)
                    coef = Fraction(m) / 2 + g0
                    if coef:
                        for nu, v in self._apply("G", m - g0, rest).items():
                            add(res, nu, coef * v)
            else:
                if m < 0 and -m > g0:
                    add(res, ((), (-m,) + mu, tower), 1)
                elif m < 0 and -m == g0:
                    # G_{-g}^2 = L_{-2g}
                    for nu, v in self._apply("L", 2 * m, rest).items():
                        add(res, nu, v)
                else:
                    for nu, v in self._apply("G", m, rest).items():
                        for nu2, v2 in self._apply("G", -g0, nu).items():
                            add(res, nu2, -v * v2)
                    for nu, v in self._apply("L", m - g0, rest).items():
                        add(res, nu, 2 * v)
                    if m == g0:
                        add(res, rest, c / 2 * (m * m - Fraction(1, 4)))
        else:
            if m == 0:
                if kind == "L":
                    add(res, mono, self.delta)
                else:
                    if self.sector != "r":
                        raise ValueError("G_0 exists only in the Ramond sector")
                    add(res, ((), (), -tower), self.g0)
            elif m < 0:
                if kind == "L":
                    add(res, ((int(-m),), (), tower), 1)
                else:
                    add(res, ((), (-m,), tower), 1)
        self._memo[key] = res
        return res

    def _act(self, kind, m, state):
        m = self._check_mode(kind, m)
        if kind == "L":
            m = int(m)
        out: dict = {}
        for mono, coeff in state.items():
            mono = (tuple(mono[0]), tuple(Fraction(x) for x in mono[1]), mono[2])
            for nu, v in self._apply(kind, m, mono).items():
                self._add(out, nu, coeff * v)
        return {BasisIndex(*k): v for k, v in out.items()}

    def act_L(self, n, state: dict) -> dict:
        """Apply ``L_n`` to ``{monomial: coefficient}``."""
        return self._act("L", n, state)

    def act_G(self, r, state: dict) -> dict:
        """Apply ``G_r`` to ``{monomial: coefficient}``."""
        return self._act("G", r, state)

    def vacuum(self, tower: int = 1) -> BasisIndex:
        if self.sector == "r":
            if tower not in (1, -1):
                raise ValueError("Ramond tower must be +1 or -1")
            return BasisIndex((), (), tower)
        return BasisIndex((), (), 0)

    # -- bilinear form --------------------------------------------------
    @staticmethod
    def dagger_word(mono):
        """Lowering word of ``mono``'s conjugate, in application order."""
        lam, mu, _ = mono
        return [("L", k) for k in lam] + [("G", g) for g in mu]

    def pair(self, u, v) -> object:
        """Shapovalov pairing ``<u, v>`` (complex-bilinear, <+|-> = 0)."""
        vec = {tuple(v): Fraction(1)}
        for kind, m in self.dagger_word(u):
            out: dict = {}
            for mono, coeff in vec.items():
                for nu, w in self._apply(kind, m, mono).items():
                    self._add(out, nu, coeff * w)
            vec = out
            if not vec:
                return Fraction(0)
        return vec.get(((), (), u[2]), Fraction(0))

    def basis(self, level):
        return nsr_basis(self.sector, level)

    def gram_matrix(self, level) -> list:
        level = Fraction(level)
        hit = self._grams.get(level)
        if hit is None:
            b = self.basis(level)
            n = len(b)
            hit = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    hit[i][j] = hit[j][i] = self.pair(b[i], b[j])
            self._grams[level] = hit
        return [row[:] for row in hit]

    def whittaker_pairing(self, u, sign: int = 1):
        """``<u, |N>>`` for the Whittaker component of matching level.

        NS rules: ``G_{1/2} -> 1``, ``L_1 -> 1`` (the composite of two
        ``G_{1/2}``), anything else annihilates.  R rules: ``L_1 -> 1/2``,
        anything else annihilates.  The base case pairs only with the
        starting tower.
        """
        coef = Fraction(1)
        for kind, m in self.dagger_word(u):
            if self.sector == "ns":
                if kind == "G" and m == HALF:
                    continue
                if kind == "L" and m == 1:
                    continue
                return Fraction(0)
            if kind == "L" and m == 1:
                coef *= HALF
            else:
                return Fraction(0)
        start = sign if self.sector == "r" else 0
        return coef if u[2] == start else Fraction(0)

    def whittaker_pairing_vector(self, level, sign: int = 1) -> list:
        if self.sector == "ns":
            # composite rule L_1 = G_{1/2}^2 must agree with the primitive one
            assert self.whittaker_pairing(((1,), (), 0)) == self.whittaker_pairing(((), (HALF,), 0)) ** 2
        return [self.whittaker_pairing(u, sign) for u in self.basis(level)]

    def whittaker_components(self, level, sign: int = 1) -> list:
        """Coefficients of the level-``level`` Whittaker component in the basis."""
        gram = self.gram_matrix(level)
        rhs = self.whittaker_pairing_vector(level, sign)
        if not any(rhs):
            return [Fraction(0)] * len(rhs)
        try:
            return [simplify(x) for x in solve(gram, rhs)]
        except SingularMatrixError:
            raise DegenerateMomentumError(
                f"singular Gram matrix at level {level} (non-generic P={self.P})"
            ) from None

    def _levels(self, order):
        step = HALF if self.sector == "ns" else Fraction(1)
        lv = step
        while lv <= order:
            yield lv
            lv += step

    def block_series(self, order, sign: int = 1) -> GradedSeries:
        """``z**h * sum_N <N|N> z**N`` (NS steps 1/2, R steps 1)."""
        order = Fraction(order)
        coeffs = {Fraction(0): Fraction(1)}
        for lv in self._levels(order):
            comp = self.whittaker_components(lv, sign)
            rhs = self.whittaker_pairing_vector(lv, sign)
            coeffs[lv] = simplify(sum((a * b for a, b in zip(comp, rhs)), Fraction(0)))
        return GradedSeries(self.delta, coeffs, order)

    def zero_mode_block(self, order) -> GradedSeries:
        """``<W_-(1)| G_0 |W_+(z)>`` for the Ramond sector."""
        if self.sector != "r":
            raise ValueError("zero-mode block is defined in the Ramond sector only")
        order = Fraction(order)
        coeffs = {Fraction(0): self.g0}
        for lv in self._levels(order):
            b = self.basis(lv)
            plus = self.whittaker_components(lv, 1)
            minus = self.whittaker_components(lv, -1)
            total = 0
            for u, x in zip(b, minus):
                if not x:
                    continue
                for v, y in zip(b, plus):
                    if not y:
                        continue
                    g0v = self._apply("G", Fraction(0), tuple(v))
                    s = 0
                    for w, val in g0v.items():
                        s = s + val * self.pair(u, w)
                    total = total + x * y * s
            coeffs[lv] = simplify(total)
        return GradedSeries(self.delta, coeffs, order)
