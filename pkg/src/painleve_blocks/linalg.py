"""Exact dense linear solves.

Rational systems are cleared of denominators row by row and solved with
fraction-free (Bareiss) elimination over the integers, optionally handed
to FLINT when ``python-flint`` is importable.  Systems with entries in
Q(i, sqrt 2) use Gaussian elimination with exact pivoting.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

try:  # optional accelerator
    import flint as _flint
except ImportError:  # pragma: no cover - exercised when flint is absent
    _flint = None

__all__ = ["SingularMatrixError", "solve", "solve_rational", "solve_generic", "backend"]

_BACKEND = {"name": "flint" if _flint is not None else "bareiss"}


class SingularMatrixError(ArithmeticError):
    """The matrix has no inverse; ``column`` is the first failing pivot."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


def backend(name: str | None = None) -> str:
    """Query or set the rational backend (``"flint"`` or ``"bareiss"``)."""
    if name is not None:
        if name == "flint" and _flint is None:
            raise RuntimeError("python-flint is not installed")
        if name not in ("flint", "bareiss"):
            raise ValueError(f"unknown backend {name!r}")
        _BACKEND["name"] = name
    return _BACKEND["name"]


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly and return ``x`` as a list."""
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("solve expects a square system")
    if n == 0:
        return []
    if all(_is_rational(v) for row in matrix for v in row) and all(_is_rational(v) for v in rhs):
        return solve_rational(matrix, rhs)
    return solve_generic(matrix, rhs)


def _integer_rows(matrix, rhs):
    rows = []
    for row, r in zip(matrix, rhs):
        vals = [Fraction(v) for v in row] + [Fraction(r)]
        m = lcm(*(v.denominator for v in vals))
        rows.append([v.numerator * (m // v.denominator) for v in vals])
    return rows


def solve_rational(matrix, rhs) -> list[Fraction]:
    n = len(matrix)
    if _BACKEND["name"] == "flint":
        return _solve_flint(matrix, rhs)
    a = _integer_rows(matrix, rhs)
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise SingularMatrixError(f"singular matrix at column {k}", k)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n + 1):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(a[i][n])
        for j in range(i + 1, n):
            if a[i][j]:
                acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return x


def _solve_flint(matrix, rhs) -> list[Fraction]:
    n = len(matrix)
    a = _integer_rows(matrix, rhs)
    m = _flint.fmpz_mat([row[:n] for row in a])
    b = _flint.fmpz_mat([[row[n]] for row in a])
    try:
        x = m.solve(b)
    except ZeroDivisionError:
        raise SingularMatrixError("singular matrix") from None
    return [Fraction(int(x[i, 0].p), int(x[i, 0].q)) for i in range(n)]


def solve_generic(matrix, rhs):
    """Gaussian elimination for any exact field with ``==``, ``*``, ``/``."""
    n = len(matrix)
    a = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise SingularMatrixError(f"singular matrix at column {k}", k)
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                rowi = a[i]
                for j in range(k + 1, n + 1):
                    if rowk[j]:
                        rowi[j] = rowi[j] - f * rowk[j]
                rowi[k] = 0
    x = [0] * n
    for i in range(n - 1, -1, -1):
        acc = a[i][n]
        for j in range(i + 1, n):
            if a[i][j] and x[j]:
                acc = acc - a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return x
