"""The acceptance matrix as data, plus a runner."""
from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .blowup import EmbeddingParams, injected_fault, verify_hatf, verify_okamoto_r, verify_todablock
from .kiev import (
    verify_backlund_profd,
    verify_blockquarter,
    verify_bridge,
    verify_hook_bn,
    verify_okamoto_c1,
    verify_tau3,
    verify_toda_c1,
)
from .numeric import check_algebraic, compare_series_ode
from .properties import DEFAULT_SEED, run_property_checks
from .virasoro import verify_block_sanity

F = Fraction
SIGMAS = (F(3, 10), F(3, 7), F(5, 13))
BLOWUP_POINTS = ((F(2), F(3, 7)), (F(3, 2), F(1, 5)))
BACKLUND_POINTS = ((F(3, 10), F(1)), (F(3, 7), F(2)))


@dataclass
class Entry:
    criterion: int
    label: str
    run: Callable
    budget: float
    finding: bool = False  # outcome recorded, exit code unaffected


@dataclass
class SuiteResult:
    name: str
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.rows if not r["finding"])

    def to_json_obj(self, timing: bool = True) -> dict:
        rows = self.rows if timing else [_without_timing(r) for r in self.rows]
        return {"suite": self.name, "ok": self.ok, "rows": rows}

    def table(self) -> str:
        out = [f"{'crit':>4}  {'status':<7} {'time':>8}  check"]
        for r in self.rows:
            status = "PASS" if r["ok"] else ("FINDING" if r["finding"] else "FAIL")
            out.append(f"{r['criterion']:>4}  {status:<7} {r['timing']:>7.2f}s  {r['label']}")
        out.append(f"overall: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(out)


def _without_timing(obj):
    if isinstance(obj, dict):
        return {k: _without_timing(v) for k, v in obj.items() if k != "timing"}
    if isinstance(obj, list):
        return [_without_timing(v) for v in obj]
    return obj


def _entries(seed: int) -> list[Entry]:
    e = [Entry(1, "block-sanity", verify_block_sanity, 1.0)]
    for s in SIGMAS:
        e.append(Entry(2, f"tau3 sigma={s}", lambda s=s: verify_tau3(s, 8), 120.0))
    for s in SIGMAS:
        e.append(Entry(3, f"toda-c1 sigma={s}", lambda s=s: verify_toda_c1(s, 8), 60.0))
    for s in SIGMAS:
        e.append(Entry(4, f"okamoto-c1 sigma={s}", lambda s=s: verify_okamoto_c1(s, 8), 60.0))
    e.append(Entry(5, "blockquarter +", lambda: verify_blockquarter(1, 5), 30.0))
    e.append(Entry(5, "blockquarter -", lambda: verify_blockquarter(-1, 5), 30.0))
    e.append(Entry(5, "hook-bn", lambda: verify_hook_bn(4), 30.0))
    for b, P in BLOWUP_POINTS:
        e.append(Entry(6, f"blowup-ns b={b} P={P}",
                       lambda b=b, P=P: verify_todablock(EmbeddingParams(b, P), 6), 300.0))
        e.append(Entry(6, f"hatf-ns b={b} P={P}",
                       lambda b=b, P=P: verify_hatf(EmbeddingParams(b, P), "ns", 4), 300.0))
    for b, P in BLOWUP_POINTS:
        e.append(Entry(7, f"blowup-r b={b} P={P}",
                       lambda b=b, P=P: verify_okamoto_r(EmbeddingParams(b, P), 10, F(9, 4)), 900.0))
        e.append(Entry(7, f"hatf-r b={b} P={P}",
                       lambda b=b, P=P: verify_hatf(EmbeddingParams(b, P), "r", 4), 900.0))
    for b, P in BLOWUP_POINTS:
        e.append(Entry(7, f"extension blowup-r order=14 window=11/4 b={b} P={P}",
                       lambda b=b, P=P: verify_okamoto_r(EmbeddingParams(b, P), 14, F(11, 4)),
                       900.0, finding=True))
    for s, st in BACKLUND_POINTS:
        e.append(Entry(8, f"backlund sigma={s} stilde={st}",
                       lambda s=s, st=st: verify_backlund_profd(s, st, 6), 120.0))
    for s in (F(3, 10), F(3, 7)):
        e.append(Entry(9, f"bridge sigma={s}", lambda s=s: verify_bridge(s, 6), 10.0))
    e.append(Entry(10, "ode compare sigma=3/10 stilde=1",
                   lambda: compare_series_ode(F(3, 10), F(1), 0.01, 0.25), 60.0))
    e.append(Entry(10, "ode algebraic +", lambda: check_algebraic(1), 60.0))
    e.append(Entry(10, "ode algebraic -", lambda: check_algebraic(-1), 60.0))
    e.append(Entry(11, f"properties seed={seed}", lambda: run_property_checks(seed), 120.0))
    return e


SUITES = ("paper-all",)


def run_suite(name: str = "paper-all", fault: str | None = None, seed: int = DEFAULT_SEED,
              criteria=None, progress=None) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    result = SuiteResult(name)
    ctx = injected_fault(fault) if fault else contextlib.nullcontext()
    with ctx:
        for entry in _entries(seed):
            if criteria and entry.criterion not in criteria:
                continue
            rep = entry.run()
            row = {
                "criterion": entry.criterion,
                "label": entry.label,
                "ok": bool(rep.ok),
                "finding": entry.finding,
                "timing": rep.timing,
                "budget": entry.budget,
                "report": rep.to_json_obj(),
            }
            result.rows.append(row)
            if progress:
                progress(row)
    return result
