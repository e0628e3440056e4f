"""Exact arithmetic over Q and the biquadratic field Q(i, sqrt 2).

Every coefficient in the package is either a :class:`fractions.Fraction`
or an :class:`ExactScalar`.  Code elsewhere is written against the
ordinary arithmetic operators, so purely rational inputs stay on the
(fast) ``Fraction`` path and only computations that genuinely need ``i``
or ``sqrt 2`` pay for the four-component representation.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "ExactScalar",
    "Scalar",
    "I",
    "R2",
    "as_scalar",
    "simplify",
    "is_zero",
    "pow_two",
    "parse_rational",
    "parse_scalar",
    "render",
    "FractionalPowerError",
]


class FractionalPowerError(ArithmeticError):
    """A power of two outside (1/2)Z reached materialization."""


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class ExactScalar:
    """Element ``a + b*i + c*sqrt2 + d*i*sqrt2`` of Q(i, sqrt 2).

    Instances are immutable and hashable; equal values hash equally, and a
    scalar with vanishing irrational parts compares (and hashes) like the
    corresponding ``Fraction``.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", _q(a))
        object.__setattr__(self, "b", _q(b))
        object.__setattr__(self, "c", _q(c))
        object.__setattr__(self, "d", _q(d))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    def __reduce__(self):
        return (ExactScalar, (self.a, self.b, self.c, self.d))

    @classmethod
    def _coerce(cls, other) -> "ExactScalar | None":
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Rational)):
            return cls(other)
        return None

    # -- queries -------------------------------------------------------
    @property
    def parts(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def __bool__(self) -> bool:
        return bool(self.a or self.b or self.c or self.d)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.parts == o.parts

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.a)
        return hash(self.parts)

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.a, -self.b, -self.c, -self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            q = _q(other)
            return ExactScalar(self.a * q, self.b * q, self.c * q, self.d * q)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        a, b, c, d = self.parts
        e, f, g, h = other.parts
        return ExactScalar(
            a * e - b * f + 2 * (c * g - d * h),
            a * f + b * e + 2 * (c * h + d * g),
            a * g + c * e - b * h - d * f,
            a * h + d * e + b * g + c * f,
        )

    __rmul__ = __mul__

    def conj_i(self) -> "ExactScalar":
        """Automorphism i -> -i."""
        return ExactScalar(self.a, -self.b, self.c, -self.d)

    def conj_sqrt2(self) -> "ExactScalar":
        """Automorphism sqrt2 -> -sqrt2."""
        return ExactScalar(self.a, self.b, -self.c, -self.d)

    def norm(self) -> Fraction:
        """Field norm down to Q (product of the four conjugates)."""
        # (u + iv)(u - iv) = u^2 + v^2 with u, v in Q(sqrt2)
        a, b, c, d = self.parts
        p = a * a + b * b + 2 * (c * c + d * d)
        q = 2 * (a * c + b * d)
        return p * p - 2 * q * q

    def inverse(self) -> "ExactScalar":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(i, sqrt2)")
        a, b, c, d = self.parts
        p = a * a + b * b + 2 * (c * c + d * d)
        q = 2 * (a * c + b * d)
        n = p * p - 2 * q * q
        # x^-1 = conj_i(x) * (p - q sqrt2) / n
        return self.conj_i() * ExactScalar(p / n, 0, -q / n, 0)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            q = _q(other)
            if not q:
                raise ZeroDivisionError("division by zero")
            return ExactScalar(self.a / q, self.b / q, self.c / q, self.d / q)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (self.inverse()) ** (-k)
        result = ExactScalar(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self) -> str:
        return f"ExactScalar({render(self)!r})"

    def __str__(self) -> str:
        return render(self)


Scalar = Union[Fraction, ExactScalar]

I = ExactScalar(0, 1)
R2 = ExactScalar(0, 0, 1)


def as_scalar(x) -> Scalar:
    """Coerce ints, Fractions, ExactScalars and strings into a field element."""
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return _q(x)


def simplify(x) -> Scalar:
    """Drop to ``Fraction`` whenever the value is rational."""
    if isinstance(x, ExactScalar) and x.is_rational():
        return x.a
    if isinstance(x, int):
        return Fraction(x)
    return x


def is_zero(x) -> bool:
    return not x


def pow_two(e) -> Scalar:
    """Exact ``2**e`` for ``e`` in (1/2)Z."""
    e = _q(e)
    twice = 2 * e
    if twice.denominator != 1:
        raise FractionalPowerError(f"fractional 2-power leaked: 2^({e})")
    k = twice.numerator
    whole, half = divmod(k, 2)
    value = Fraction(2) ** whole
    if half:
        return ExactScalar(0, 0, value)
    return value


# -- string format ----------------------------------------------------

_RAT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimals such as ``"0.25"`` are accepted too."""
    m = _RAT.match(text)
    if m:
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed rational {text!r}") from None


_UNITS = {"": 0, "I": 1, "R2": 2, "I*R2": 3, "R2*I": 3}


def _split_terms(text: str):
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    terms, start, depth = [], 0, 0
    for pos, ch in enumerate(s):
        if ch in "+-" and pos > start and s[pos - 1] not in "*/(":
            terms.append(s[start:pos])
            start = pos
    terms.append(s[start:])
    return terms


def parse_scalar(text: str) -> Scalar:
    """Parse ``"a + b*I + c*R2 + d*I*R2"`` (any subset, any order)."""
    parts = [Fraction(0)] * 4
    for term in _split_terms(text):
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        if not body:
            raise ValueError(f"malformed scalar {text!r}")
        unit = ""
        for name in ("I*R2", "R2*I", "R2", "I"):
            if body == name:
                body, unit = "1", name
                break
            if body.endswith("*" + name):
                body, unit = body[: -len(name) - 1], name
                break
        parts[_UNITS[unit]] += sign * parse_rational(body)
    return simplify(ExactScalar(*parts))


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render(x) -> str:
    """Canonical string form; inverse of :func:`parse_scalar`."""
    x = as_scalar(x)
    if not isinstance(x, ExactScalar):
        return _fmt(x)
    out = []
    for coeff, unit in zip(x.parts, ("", "I", "R2", "I*R2")):
        if not coeff:
            continue
        mag = _fmt(abs(coeff))
        body = mag if not unit else f"{mag}*{unit}"
        if not out:
            out.append(body if coeff > 0 else "-" + body)
        else:
            out.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(out) if out else "0"
