"""Partitions, fermionic mode sets and graded bases of Verma modules."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

HALF = Fraction(1, 2)


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    def __repr__(self):
        return f"Partition({tuple(self)})"


class ModeSet(tuple):
    """Strictly decreasing tuple of positive modes on a common grid Z + offset."""

    __slots__ = ()

    def __new__(cls, modes=(), offset=None):
        modes = tuple(Fraction(m) for m in modes)
        if any(m <= 0 for m in modes):
            raise ValueError(f"modes must be positive: {modes}")
        if any(a <= b for a, b in zip(modes, modes[1:])):
            raise ValueError(f"modes must be strictly decreasing: {modes}")
        offsets = {m - (m.numerator // m.denominator) for m in modes}
        if len(offsets) > 1 or any(o not in (0, HALF) for o in offsets):
            raise ValueError(f"modes must share an offset in {{0, 1/2}}: {modes}")
        if offset is not None and offsets and offsets != {Fraction(offset)}:
            raise ValueError(f"modes {modes} are not on the Z+{offset} grid")
        return super().__new__(cls, modes)

    @property
    def weight(self) -> Fraction:
        return sum(self, Fraction(0))


class BasisIndex(NamedTuple):
    """Index of ``L_{-partition} G_{-gmodes} |highest weight, tower>``.

    ``tower`` is ``+1``/``-1`` in the Ramond sector and ``0`` otherwise.
    """

    partition: tuple
    gmodes: tuple = ()
    tower: int = 0

    @property
    def level(self) -> Fraction:
        return sum(self.partition, Fraction(0)) + sum(self.gmodes, Fraction(0))


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            out.append((k,) + rest)
    return tuple(out)


def partitions_of(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order ((n) first, (1^n) last)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return [Partition(p) for p in _partitions(n, n)]


def partition_tuples(n: int) -> tuple:
    """Same as :func:`partitions_of` but as bare cached tuples (hot paths)."""
    return _partitions(n, n)


@lru_cache(maxsize=None)
def _strict(total: Fraction, largest: Fraction, offset: Fraction) -> tuple:
    # strictly decreasing positive modes in Z+offset, each <= largest, summing to total
    if total == 0:
        return ((),)
    out = []
    k = min(total, largest)
    k = offset + ((k - offset).numerator // (k - offset).denominator)
    while k > 0:
        for rest in _strict(total - k, k - 1, offset):
            out.append((k,) + rest)
        k -= 1
    return tuple(out)


def strict_mode_sets(total, offset) -> list[tuple]:
    """Strict mode sets of given weight on the grid Z + offset (modes > 0)."""
    total, offset = Fraction(total), Fraction(offset)
    return list(_strict(total, total, offset))


def _sector_offset(sector: str) -> Fraction:
    s = sector.lower()
    if s == "ns":
        return HALF
    if s == "r":
        return Fraction(0)
    raise ValueError(f"unknown sector {sector!r} (expected 'ns' or 'r')")


@lru_cache(maxsize=None)
def _nsr_basis(sector: str, level: Fraction) -> tuple:
    offset = _sector_offset(sector)
    out = []
    g = level
    while g >= 0:
        lw = level - g
        if lw.denominator == 1:
            gsets = _strict(g, g, offset) if g else ((),)
            for lam in _partitions(int(lw), int(lw)):
                for mu in gsets:
                    if sector == "r":
                        out.append(BasisIndex(lam, mu, 1))
                        out.append(BasisIndex(lam, mu, -1))
                    else:
                        out.append(BasisIndex(lam, mu, 0))
        g -= HALF
    return tuple(out)


def nsr_basis(sector: str, level) -> list[BasisIndex]:
    """Graded basis of a super-Virasoro Verma module at ``level``.

    NS levels live on (1/2)Z, R levels on Z; in the R sector every
    monomial appears once per tower (``+1`` before ``-1``).  No ``G_0``
    monomials are produced.
    """
    level = Fraction(level)
    sector = sector.lower()
    _sector_offset(sector)
    if level < 0:
        raise ValueError("level must be non-negative")
    if sector == "ns" and (2 * level).denominator != 1:
        raise ValueError(f"NS level must be in (1/2)Z, got {level}")
    if sector == "r" and level.denominator != 1:
        raise ValueError(f"R level must be an integer, got {level}")
    return list(_nsr_basis(sector, level))


def hook_lengths(parts) -> list[int]:
    """Hook lengths of every box of a Young diagram, row by row."""
    parts = list(parts)
    conj = [sum(1 for p in parts if p > j) for j in range(parts[0])] if parts else []
    return [
        (p - j - 1) + (conj[j] - i - 1) + 1
        for i, p in enumerate(parts)
        for j in range(p)
    ]


def staircase_hook_product(k: int) -> int:
    """Product of hook lengths of the staircase (k, k-1, ..., 1)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    prod = 1
    for h in hook_lengths(range(k, 0, -1)):
        prod *= h
    return prod
