"""Virasoro Verma modules, Shapovalov forms and Whittaker blocks.

States are dictionaries mapping PBW monomials (decreasing tuples of positive
integers, ``(3, 1)`` meaning ``L_{-3} L_{-1}|h>``) to exact scalars.

The action of a single mode on a monomial is computed once symbolically,
with coefficients that are polynomials in the central charge ``c`` and the
weight ``h``; every parameter point then only evaluates those polynomials.
Gram matrices are built level by level from the recursion

    <L_{-lam} h, v> = <L_{-lam'} h, L_{lam_1} v>,   lam = (lam_1,) + lam'

so each entry is a short dot product with a row of a lower-level Gram matrix.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache

from .combinatorics import partition_tuples
from .exact import as_scalar, simplify
from .linalg import SingularMatrixError, solve
from .parallel import pmap
from .series import GradedSeries

__all__ = [
    "DegenerateWeightError",
    "VirasoroModule",
    "block_coefficients",
    "block_series",
    "mode_action",
    "verify_block_sanity",
]


class DegenerateWeightError(ArithmeticError):
    """The Shapovalov form is singular at ``level`` (weight on a Kac line)."""

    def __init__(self, level, c, delta):
        super().__init__(
            f"degenerate weight (Kac line): Gram matrix singular at level {level} "
            f"for c={c}, delta={delta}"
        )
        self.level = level


# -- polynomials in (c, h) ----------------------------------------------
# A polynomial is a dict {(deg_c, deg_h): Fraction}.

def _padd(acc, p, scale=1):
    for k, v in p.items():
        w = acc.get(k, 0) + scale * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


def _pmul_mono(p, dc, dh, scale):
    return {(i + dc, j + dh): scale * v for (i, j), v in p.items()}


def _pmul(p, q):
    out = {}
    for (i, j), v in p.items():
        for (k, l), w in q.items():
            key = (i + k, j + l)
            s = out.get(key, 0) + v * w
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


_ONE = {(0, 0): Fraction(1)}
_lock = threading.Lock()


def _vadd(acc, mono, poly):
    cur = acc.get(mono)
    if cur is None:
        if poly:
            acc[mono] = dict(poly)
        return
    _padd(cur, poly)
    if not cur:
        del acc[mono]


@lru_cache(maxsize=None)
def mode_action(m: int, mono: tuple):
    """``L_m`` applied to the PBW monomial ``mono``, symbolically in (c, h).

    Returns a tuple of ``(monomial, poly)`` pairs; ``poly`` maps
    ``(deg_c, deg_h)`` to a rational coefficient.
    """
    res: dict = {}
    if not mono:
        if m == 0:
            res[()] = {(0, 1): Fraction(1)}
        elif m < 0:
            res[(-m,)] = dict(_ONE)
        return tuple(res.items())
    if m < 0 and -m >= mono[0]:
        return (((-m,) + mono, dict(_ONE)),)
    k0, rest = mono[0], mono[1:]
    if m == 0:
        # L_0 is diagonal: h + level
        level = sum(mono)
        return ((mono, {(0, 1): Fraction(1), (0, 0): Fraction(level)}),)
    # L_m L_{-k0} rest = L_{-k0} L_m rest + (m + k0) L_{m-k0} rest + central term
    for nu, p in mode_action(m, rest):
        for nu2, q in mode_action(-k0, nu):
            _vadd(res, nu2, _pmul(p, q))
    if m + k0:
        for nu, p in mode_action(m - k0, rest):
            _vadd(res, nu, {k: (m + k0) * v for k, v in p.items()})
    if m == k0:
        _vadd(res, rest, {(1, 0): Fraction(m ** 3 - m, 12)})
    return tuple(res.items())


def _eval(poly, cpow, hpow):
    total = 0
    for (i, j), v in poly.items():
        total = total + v * cpow[i] * hpow[j]
    return total


class VirasoroModule:
    """Verma module of central charge ``c`` and highest weight ``delta``."""

    def __init__(self, c, delta):
        self.c = simplify(as_scalar(c))
        self.delta = simplify(as_scalar(delta))
        self._cpow = [Fraction(1)]
        self._hpow = [Fraction(1)]
        self._grams: dict[int, list] = {0: [[Fraction(1)]]}
        self._norms: list = [Fraction(1)]
        self._action_cache: dict = {}

    # -- helpers -------------------------------------------------------
    def _powers(self, deg):
        while len(self._cpow) <= deg:
            self._cpow.append(self._cpow[-1] * self.c)
            self._hpow.append(self._hpow[-1] * self.delta)

    def _action(self, m, mono):
        key = (m, mono)
        hit = self._action_cache.get(key)
        if hit is None:
            terms = mode_action(m, mono)
            deg = max((max(i, j) for _, p in terms for i, j in p), default=0)
            self._powers(deg)
            hit = []
            for nu, p in terms:
                v = _eval(p, self._cpow, self._hpow)
                if v:
                    hit.append((nu, v))
            self._action_cache[key] = hit
        return hit

    # -- public API ----------------------------------------------------
    def act_L(self, n: int, state: dict) -> dict:
        """Apply ``L_n`` to a state ``{monomial: coefficient}``."""
        out: dict = {}
        for mono, coeff in state.items():
            for nu, v in self._action(n, tuple(mono)):
                w = out.get(nu, 0) + coeff * v
                if w:
                    out[nu] = w
                else:
                    out.pop(nu, None)
        return out

    def basis(self, level: int) -> tuple:
        return partition_tuples(level)

    def gram_matrix(self, level: int) -> list:
        """Shapovalov matrix at ``level`` in reverse-lexicographic basis order."""
        if level < 0:
            raise ValueError("level must be non-negative")
        for lv in range(1, level + 1):
            if lv not in self._grams:
                self._grams[lv] = self._build_gram(lv)
        return [row[:] for row in self._grams[level]]

    def _build_gram(self, level):
        basis = partition_tuples(level)
        index_cache = {}
        n = len(basis)
        gram = [[None] * n for _ in range(n)]
        for i, lam in enumerate(basis):
            head, tail = lam[0], lam[1:]
            lower = level - head
            if lower not in index_cache:
                index_cache[lower] = {p: t for t, p in enumerate(partition_tuples(lower))}
            lower_index = index_cache[lower]
            lower_row = self._grams[lower][lower_index[tail]]
            for j in range(i, n):
                acc = 0
                for nu, v in self._action(head, basis[j]):
                    g = lower_row[lower_index[nu]]
                    if g:
                        acc = acc + v * g
                gram[i][j] = acc
                gram[j][i] = acc
        return gram

    def whittaker_norms(self, nmax: int) -> list:
        """``[a_0, ..., a_nmax]``: norms of the Whittaker components.

        ``a_N`` is the diagonal entry of the inverse Gram matrix at the
        monomial ``L_{-1}^N``.
        """
        if nmax < len(self._norms):
            return self._norms[: nmax + 1]
        self.gram_matrix(nmax)
        todo = list(range(len(self._norms), nmax + 1))
        results = pmap(_last_inverse_entry, [(self._grams[lv], lv) for lv in todo])
        for lv, val in zip(todo, results):
            if isinstance(val, SingularMatrixError):
                raise DegenerateWeightError(lv, self.c, self.delta)
            self._norms.append(simplify(val))
        return self._norms[: nmax + 1]

    def block_series(self, order: int) -> GradedSeries:
        """``z**delta * sum_N a_N z**N`` through ``z**(delta+order)``."""
        return GradedSeries.from_list(self.delta, self.whittaker_norms(int(order)))


def _last_inverse_entry(args):
    gram, level = args
    n = len(gram)
    rhs = [Fraction(0)] * n
    rhs[-1] = Fraction(1)
    try:
        return solve(gram, rhs)[-1]
    except SingularMatrixError as exc:
        return exc


_modules: dict = {}


def _module(c, delta) -> VirasoroModule:
    key = (simplify(as_scalar(c)), simplify(as_scalar(delta)))
    with _lock:
        mod = _modules.get(key)
        if mod is None:
            mod = _modules[key] = VirasoroModule(*key)
    return mod


def block_coefficients(c, delta, order: int) -> list:
    """Cached ``[a_0, ..., a_order]`` of the Whittaker block."""
    return _module(c, delta).whittaker_norms(int(order))


def block_series(c, delta, order: int) -> GradedSeries:
    return GradedSeries.from_list(simplify(as_scalar(delta)), block_coefficients(c, delta, order))


def clear_caches() -> None:
    with _lock:
        _modules.clear()


def verify_block_sanity(delta=Fraction(9, 100)):
    """First two ``c = 1`` block coefficients against closed forms.

    ``a_1 = 1/(2 delta)`` and ``a_2 = (8 delta + 1)/(4 delta (4 delta - 1)^2)``.
    """
    from .report import Report, stopwatch

    delta = Fraction(delta)
    with stopwatch() as sw:
        a = block_coefficients(Fraction(1), delta, 2)
        want = [Fraction(1), 1 / (2 * delta), (8 * delta + 1) / (4 * delta * (4 * delta - 1) ** 2)]
        res = [(Fraction(k), simplify(a[k] - want[k])) for k in range(3) if a[k] != want[k]]
    return Report("block-sanity", {"c": 1, "delta": delta}, Fraction(2), not res, res,
                  sw["elapsed"], details={"a1": a[1], "a2": a[2]})
