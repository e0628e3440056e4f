"""Verification reports with a stable JSON form."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import render, simplify
from .series import ExponentKeyedSum, GradedSeries


class VerificationFailure(AssertionError):
    """Raised by ``Report.require`` when a check produced a residual."""


def residual_terms(series, cap=None) -> list[tuple[Fraction, object]]:
    """Nonzero coefficients of a residual series, as (exponent, value)."""
    if isinstance(series, GradedSeries):
        series = series.to_sum()
    if not isinstance(series, ExponentKeyedSum):
        raise TypeError("expected a series")
    out = []
    for e, v in series.items():
        if cap is not None and e > cap:
            continue
        if v:
            out.append((e, simplify(v)))
    return out


@dataclass
class Report:
    check: str
    params: dict
    order: Fraction
    ok: bool
    residuals: list = field(default_factory=list)
    timing: float = 0.0
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def residual_exponents(self) -> list[Fraction]:
        return [e for e, _ in self.residuals]

    def to_json_obj(self) -> dict:
        return {
            "check": self.check,
            "params": {k: _str(v) for k, v in self.params.items()},
            "order": _str(self.order),
            "ok": bool(self.ok),
            "residuals": [[_str(e), render(v)] for e, v in self.residuals],
            "residual_exponents": [_str(e) for e in self.residual_exponents],
            "timing": round(self.timing, 6),
            "notes": list(self.notes),
            "details": _jsonable(self.details),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_obj(), **kw)

    def require(self) -> "Report":
        if not self.ok:
            first = self.residuals[0] if self.residuals else None
            raise VerificationFailure(
                f"{self.check} failed"
                + (f" at exponent {_str(first[0])} (residual {render(first[1])})" if first else "")
            )
        return self

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        params = ", ".join(f"{k}={_str(v)}" for k, v in self.params.items())
        extra = "" if self.ok else f", {len(self.residuals)} nonzero residual(s)"
        return f"{status} {self.check}({params}) order={_str(self.order)}{extra} [{self.timing:.2f}s]"


def _str(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, Fraction)):
        return render(Fraction(x))
    if isinstance(x, float):
        return repr(x)
    try:
        return render(x)
    except TypeError:
        return str(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Report):
        return obj.to_json_obj()
    return _str(obj)


@contextmanager
def stopwatch():
    box = {"elapsed": 0.0}
    start = time.perf_counter()
    try:
        yield box
    finally:
        box["elapsed"] = time.perf_counter() - start


def combine(check: str, params: dict, order, parts: list[Report], notes=()) -> Report:
    """Aggregate sub-reports; ok iff all parts are ok."""
    residuals = []
    for p in parts:
        residuals.extend(p.residuals)
    return Report(
        check=check,
        params=params,
        order=Fraction(order),
        ok=all(p.ok for p in parts),
        residuals=residuals,
        timing=sum(p.timing for p in parts),
        notes=list(notes),
        details={"parts": [p.to_json_obj() for p in parts]},
    )
