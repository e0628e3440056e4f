"""Truncated formal series in z with exact exponents.

Two containers are provided:

* :class:`GradedSeries` -- ``z**base * sum_k c_k z**k`` with ``k`` on the
  half-integer grid and an explicit truncation ``order`` (steps ``<= order``
  are trusted).  This is the natural home of conformal blocks.
* :class:`ExponentKeyedSum` -- a sparse map ``exponent -> coefficient`` with
  an absolute ``cap`` (exponents ``<= cap`` are trusted).  Used for sums of
  blocks whose leading exponents are not on a common grid.

Reading a coefficient beyond the trusted range raises
:class:`TruncationError` instead of returning zero.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import factorial

from .exact import as_scalar, parse_rational, parse_scalar, render, simplify

__all__ = [
    "TruncationError",
    "NonInvertibleSeries",
    "GradedSeries",
    "ExponentKeyedSum",
    "exp_sqrt",
]

HALF = Fraction(1, 2)
INF = None  # cap value meaning "exact, no truncation"


class TruncationError(LookupError):
    """Coefficient requested beyond the trusted truncation order."""


class NonInvertibleSeries(ArithmeticError):
    """Leading coefficient vanishes where an inverse was required."""


def _on_grid(x: Fraction) -> bool:
    return (2 * x).denominator == 1


def _fmt_q(q: Fraction) -> str:
    return render(Fraction(q))


def _min_cap(*caps):
    finite = [c for c in caps if c is not None]
    return min(finite) if finite else None


class ExponentKeyedSum:
    """Sparse series ``sum_e c_e z**e`` trusted for every ``e <= cap``."""

    __slots__ = ("terms", "cap")

    def __init__(self, terms=None, cap=None):
        self.cap = None if cap is None else Fraction(cap)
        clean = {}
        for e, v in (terms or {}).items():
            e = Fraction(e)
            if self.cap is not None and e > self.cap:
                continue
            if v:
                if isinstance(v, int):
                    v = Fraction(v)
                clean[e] = clean.get(e, 0) + v
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    # -- access --------------------------------------------------------
    def __getitem__(self, e):
        e = Fraction(e)
        if self.cap is not None and e > self.cap:
            raise TruncationError(f"exponent {e} beyond trusted cap {self.cap}")
        return self.terms.get(e, Fraction(0))

    def exponents(self) -> list[Fraction]:
        return sorted(self.terms)

    def low(self) -> Fraction | None:
        """Smallest exponent with a nonzero coefficient (cap if none)."""
        return min(self.terms) if self.terms else self.cap

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, ExponentKeyedSum):
            return NotImplemented
        return self.terms == other.terms and self.cap == other.cap

    def __repr__(self):
        body = ", ".join(f"{_fmt_q(e)}: {render(v)}" for e, v in self.items()[:6])
        more = ", ..." if len(self.terms) > 6 else ""
        return f"ExponentKeyedSum({{{body}{more}}}, cap={self.cap})"

    # -- linear structure ---------------------------------------------
    def truncate(self, cap) -> "ExponentKeyedSum":
        cap = Fraction(cap)
        if self.cap is not None:
            cap = min(cap, self.cap)
        return ExponentKeyedSum(self.terms, cap)

    def __add__(self, other):
        if not isinstance(other, ExponentKeyedSum):
            return NotImplemented
        acc = dict(self.terms)
        for e, v in other.terms.items():
            acc[e] = acc.get(e, 0) + v
        return ExponentKeyedSum(acc, _min_cap(self.cap, other.cap))

    def __neg__(self):
        return ExponentKeyedSum({e: -v for e, v in self.terms.items()}, self.cap)

    def __sub__(self, other):
        if not isinstance(other, ExponentKeyedSum):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "ExponentKeyedSum":
        return ExponentKeyedSum({e: c * v for e, v in self.terms.items()}, self.cap)

    def shift(self, s) -> "ExponentKeyedSum":
        """Multiply by ``z**s``."""
        s = Fraction(s)
        cap = None if self.cap is None else self.cap + s
        return ExponentKeyedSum({e + s: v for e, v in self.terms.items()}, cap)

    def euler(self) -> "ExponentKeyedSum":
        """Apply ``z d/dz``."""
        return ExponentKeyedSum({e: e * v for e, v in self.terms.items()}, self.cap)

    def map_exponent(self, fn) -> "ExponentKeyedSum":
        """Multiply each coefficient by ``fn(exponent)``."""
        return ExponentKeyedSum({e: fn(e) * v for e, v in self.terms.items()}, self.cap)

    def _product_cap(self, other):
        caps = []
        if self.cap is not None:
            caps.append(self.cap + other.low() if other.low() is not None else None)
        if other.cap is not None:
            caps.append(other.cap + self.low() if self.low() is not None else None)
        if any(c is None for c in caps):
            # one factor is an exact zero: the product is exactly zero
            return None
        return min(caps) if caps else None

    def __mul__(self, other):
        if not isinstance(other, ExponentKeyedSum):
            return self.scale(other)
        return hirota_sum(0, 1, 1, 0, self, other)

    # -- division ------------------------------------------------------
    def inverse(self) -> "ExponentKeyedSum":
        """``1/f`` as a series around the leading term."""
        if not self.terms:
            raise NonInvertibleSeries("inverse of a (truncated) zero series")
        low = min(self.terms)
        lead = self.terms[low]
        # f = lead z^low (1 + u), u has strictly positive exponents
        u = ExponentKeyedSum(
            {e - low: v / lead for e, v in self.terms.items() if e != low},
            None if self.cap is None else self.cap - low,
        )
        if u.cap is None and not u.terms:
            return ExponentKeyedSum({-low: 1 / lead}, None)
        if u.cap is None:
            raise ValueError("inverse of an exact non-monomial needs a cap; truncate first")
        step = min(u.terms) if u.terms else u.cap
        acc = ExponentKeyedSum({Fraction(0): Fraction(1)}, u.cap)
        power = ExponentKeyedSum({Fraction(0): Fraction(1)}, None)
        j = 1
        while u.terms and j * step <= u.cap:
            power = (power * u).truncate(u.cap)
            acc = acc + power.scale(-1 if j % 2 else 1)
            j += 1
        return acc.scale(1 / lead).shift(-low)

    def __truediv__(self, other):
        if isinstance(other, ExponentKeyedSum):
            return self * other.inverse()
        return self.scale(1 / as_scalar(other))

    def __rmul__(self, other):
        return self.scale(other)

    def log_derivative(self) -> "ExponentKeyedSum":
        """``z d/dz log f`` = ``euler(f) / f``."""
        if not self.terms:
            raise NonInvertibleSeries("log-derivative of a zero series")
        return self.euler() / self

    def residual_exponents(self) -> list[Fraction]:
        return self.exponents()

    def to_json_obj(self) -> dict:
        return {
            "terms": [[_fmt_q(e), render(simplify(v))] for e, v in self.items()],
            "cap": None if self.cap is None else _fmt_q(self.cap),
        }


def hirota_sum(k, eps1, eps2, offset, f: ExponentKeyedSum, g: ExponentKeyedSum) -> ExponentKeyedSum:
    """Generalized Hirota product on sparse series.

    Term pair ``(z**a, z**b)`` contributes ``(eps1*a + eps2*b + offset)**k``
    at ``z**(a+b)``.  With ``k = 0`` this is the ordinary product.
    """
    cap = f._product_cap(g)
    acc = {}
    gitems = sorted(g.terms.items())
    for a, x in sorted(f.terms.items()):
        for b, y in gitems:
            e = a + b
            if cap is not None and e > cap:
                break
            w = x * y
            if k:
                w = w * (eps1 * a + eps2 * b + offset) ** k
            if w:
                acc[e] = acc.get(e, 0) + w
    return ExponentKeyedSum(acc, cap)


class GradedSeries:
    """``z**base * sum_{k in (1/2)Z, 0 <= k <= order} coeffs[k] z**k``."""

    __slots__ = ("base", "coeffs", "order")

    def __init__(self, base, coeffs=None, order=0):
        self.base = as_scalar(base)
        self.order = Fraction(order)
        if not _on_grid(self.order) or self.order < 0:
            raise ValueError(f"order must be a non-negative half-integer, got {order}")
        clean = {}
        for k, v in (coeffs or {}).items():
            k = Fraction(k)
            if not _on_grid(k) or k < 0:
                raise ValueError(f"step {k} is not on the non-negative half-integer grid")
            if k > self.order:
                continue
            if v:
                clean[k] = Fraction(v) if isinstance(v, int) else v
        self.coeffs = clean

    @classmethod
    def from_list(cls, base, values, step=1) -> "GradedSeries":
        """Series with ``values[i]`` at step ``i*step``; order = last step."""
        step = Fraction(step)
        coeffs = {i * step: v for i, v in enumerate(values)}
        return cls(base, coeffs, (len(values) - 1) * step)

    @classmethod
    def monomial(cls, base, coeff=1, order=0) -> "GradedSeries":
        return cls(base, {Fraction(0): as_scalar(coeff)}, order)

    # -- access --------------------------------------------------------
    def __getitem__(self, step):
        step = Fraction(step)
        if step > self.order:
            raise TruncationError(f"step {step} beyond trusted order {self.order}")
        if step < 0 or not _on_grid(step):
            return Fraction(0)
        return self.coeffs.get(step, Fraction(0))

    def steps(self) -> list[Fraction]:
        return [Fraction(k, 2) for k in range(int(2 * self.order) + 1)]

    def coefficient_list(self, step=HALF) -> list:
        step = Fraction(step)
        n = int(self.order / step)
        return [self[i * step] for i in range(n + 1)]

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (self.base, self.order, self.coeffs) == (other.base, other.order, other.coeffs)

    def __repr__(self):
        return f"GradedSeries(base={render(self.base)}, order={self.order}, terms={len(self.coeffs)})"

    def _check_base(self, other):
        diff = other.base - self.base
        diff = simplify(diff)
        if not isinstance(diff, Fraction) or not _on_grid(diff):
            raise ValueError(f"incompatible grids: bases {render(self.base)} and {render(other.base)}")
        return diff

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        diff = self._check_base(other)
        lo = min(Fraction(0), diff)
        top = min(self.order, diff + other.order)
        acc = {}
        for k, v in self.coeffs.items():
            acc[k - lo] = acc.get(k - lo, 0) + v
        for k, v in other.coeffs.items():
            acc[k + diff - lo] = acc.get(k + diff - lo, 0) + v
        if top - lo < 0:
            raise ValueError("sum has no trusted coefficients")
        return GradedSeries(self.base + lo, acc, top - lo)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "GradedSeries":
        c = as_scalar(c)
        return GradedSeries(self.base, {k: c * v for k, v in self.coeffs.items()}, self.order)

    def shift(self, s) -> "GradedSeries":
        """Multiply by ``z**s``."""
        return GradedSeries(self.base + as_scalar(s), self.coeffs, self.order)

    def truncate(self, order) -> "GradedSeries":
        order = min(Fraction(order), self.order)
        return GradedSeries(self.base, self.coeffs, order)

    def euler(self) -> "GradedSeries":
        """Apply ``z d/dz``: step ``k`` picks up the factor ``base + k``."""
        return GradedSeries(
            self.base, {k: (self.base + k) * v for k, v in self.coeffs.items()}, self.order
        )

    def __mul__(self, other):
        if isinstance(other, GradedSeries):
            return hirota(0, 1, 1, 0, self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def inverse(self) -> "GradedSeries":
        a0 = self.coeffs.get(Fraction(0), 0)
        if not a0:
            raise NonInvertibleSeries("leading coefficient is zero")
        inv = {Fraction(0): 1 / a0}
        for j in range(1, int(2 * self.order) + 1):
            k = Fraction(j, 2)
            acc = 0
            for i in range(1, j + 1):
                a = self.coeffs.get(Fraction(i, 2))
                if a:
                    b = inv.get(k - Fraction(i, 2))
                    if b:
                        acc = acc + a * b
            if acc:
                inv[k] = -acc / a0
        return GradedSeries(-self.base, inv, self.order)

    def log_derivative(self) -> "GradedSeries":
        """``euler(f)/f``; the result is an ordinary power series (base 0)."""
        q = hirota(0, 1, 1, 0, self.euler(), self.inverse())
        return GradedSeries(0, q.coeffs, q.order)

    def to_sum(self) -> ExponentKeyedSum:
        return ExponentKeyedSum(
            {self.base + k: v for k, v in self.coeffs.items()}, self.base + self.order
        )

    # -- serialization -------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "base": render(simplify(self.base)),
            "coeffs": [[_fmt_q(k), render(simplify(self[k]))] for k in self.steps()],
            "order": _fmt_q(self.order),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj) -> "GradedSeries":
        coeffs = {parse_rational(k): parse_scalar(v) for k, v in obj["coeffs"]}
        return cls(parse_scalar(obj["base"]), coeffs, parse_rational(obj["order"]))


def hirota(k, eps1, eps2, offset, f: GradedSeries, g: GradedSeries) -> GradedSeries:
    """Generalized Hirota operator ``D^k_{eps1,eps2}(f, g)`` with a weight offset.

    The pair of steps ``(m1, m2)`` contributes
    ``f[m1] g[m2] (eps1 (f.base+m1) + eps2 (g.base+m2) + offset)**k``
    at step ``m1 + m2`` of a series with base ``f.base + g.base``.
    Standard Hirota derivatives are ``eps = (1, -1)``; ``k = 0`` is the product.
    """
    order = min(f.order, g.order)
    acc = {}
    gitems = sorted(g.coeffs.items())
    fb, gb = f.base, g.base
    for m1, x in sorted(f.coeffs.items()):
        if m1 > order:
            break
        wf = eps1 * (fb + m1) + offset if k else None
        for m2, y in gitems:
            s = m1 + m2
            if s > order:
                break
            w = x * y
            if k:
                w = w * (wf + eps2 * (gb + m2)) ** k
            if w:
                acc[s] = acc.get(s, 0) + w
    return GradedSeries(fb + gb, acc, order)


def exp_sqrt(alpha, base, order) -> GradedSeries:
    """``z**base * exp(alpha * sqrt(z))`` truncated at ``order``."""
    alpha = as_scalar(alpha)
    order = Fraction(order)
    coeffs = {}
    term = Fraction(1)
    for j in range(int(2 * order) + 1):
        if j:
            term = term * alpha / j
        coeffs[Fraction(j, 2)] = term
    return GradedSeries(base, coeffs, order)
