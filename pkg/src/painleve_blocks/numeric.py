"""Floating-point layer: Hamiltonian flow, Backlund map and series/ODE comparison.

The state is ``(w, p)`` with ``zeta = p^2 w^2 - w - z/w``.  Integration runs
in ``t = log z`` with scipy's DOP853 pair on a complex state, so the same
code path serves real and complex trajectories.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from .kiev import backlund_parameters, tau_series


class SingularPointError(ArithmeticError):
    """``w`` vanished: the Hamiltonian vector field is singular there."""


class TruncationTooLarge(ValueError):
    """The series initial state is not accurate enough at the requested point."""


@dataclass(frozen=True)
class HamState:
    z: float
    w: complex
    p: complex

    def __post_init__(self):
        if not self.z > 0:
            raise ValueError(f"z must be positive, got {self.z}")

    @property
    def zeta(self) -> complex:
        return hamiltonian(self.z, self.w, self.p)


@dataclass(frozen=True)
class NumericSettings:
    rtol: float = 1e-12
    atol: float = 1e-14
    max_step: float = math.inf
    precision: int = 53

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("rtol and atol must be positive")
        if self.precision != 53:
            raise ValueError("only double precision (53 bits) is supported")


def hamiltonian(z, w, p):
    """``zeta = z H``."""
    if w == 0:
        raise SingularPointError(f"w = 0 at z = {z}")
    return p * p * w * w - w - z / w


def rhs(state: HamState) -> tuple[complex, complex]:
    """``(dw/dz, dp/dz)``."""
    z, w, p = state.z, state.w, state.p
    if w == 0:
        raise SingularPointError(f"w = 0 at z = {z}")
    return 2 * p * w * w / z, -2 * p * p * w / z + 1 / z - 1 / (w * w)


def backlund(state: HamState) -> HamState:
    """The order-two symmetry ``w -> z/w``, ``p -> -w(2wp - 1)/(2z)``."""
    z, w, p = state.z, state.w, state.p
    if w == 0:
        raise SingularPointError(f"w = 0 at z = {z}")
    return HamState(z, z / w, -w * (2 * w * p - 1) / (2 * z))


def algebraic_state(z: float, sign: int) -> HamState:
    """Backlund-invariant solution ``w = sign sqrt z``, ``p = sign/(4 sqrt z)``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    r = math.sqrt(z)
    return HamState(z, complex(sign * r), complex(sign / (4 * r)))


# -- integration --------------------------------------------------------

def _log_field(z, y):
    # y = (w, p, zeta); derivatives with respect to log z
    w, p = y[0], y[1]
    return np.array([2 * p * w * w, -2 * p * p * w + 1 - z / (w * w), -z / w])


def log_path(z0: float, z1: float, detour: float = 0.0):
    """Path in ``log z`` from ``z0`` to ``z1``, bulging by ``detour`` radians in ``arg z``.

    Returns ``(t, dt)`` as functions of the real parameter ``s`` in [0, 1].
    """
    t0, t1 = math.log(z0), math.log(z1)
    span = t1 - t0

    def t(s):
        return t0 + s * span + 1j * detour * math.sin(math.pi * s)

    def dt(s):
        return span + 1j * detour * math.pi * math.cos(math.pi * s)

    return t, dt


@dataclass
class Trajectory:
    s: np.ndarray
    z: np.ndarray
    w: np.ndarray
    p: np.ndarray
    zeta: np.ndarray
    complete: bool
    message: str
    nfev: int
    detour: float
    dense: object = field(repr=False, default=None)
    path: object = field(repr=False, default=None)

    def at(self, s: float) -> tuple[complex, complex, complex, complex]:
        """``(z, w, p, zeta)`` at path parameter ``s``."""
        y = self.dense(s)
        return complex(np.exp(self.path(s))), complex(y[0]), complex(y[1]), complex(y[2])

    def end_state(self) -> HamState:
        if not self.complete:
            raise SingularPointError(self.message)
        return HamState(float(abs(self.z[-1])), complex(self.w[-1]), complex(self.p[-1]))

    def rows(self):
        """Accepted integrator steps as ``(z, w, p, zeta)``."""
        for z, w, p, zt in zip(self.z, self.w, self.p, self.zeta):
            yield complex(z), complex(w), complex(p), complex(zt)

    def sample(self, n: int):
        """``n`` evenly spaced path points from the dense interpolant."""
        for s in np.linspace(0.0, self.s[-1], n):
            yield self.at(s)


def integrate(s0: HamState, z1: float, cfg: NumericSettings | None = None,
              zeta0: complex | None = None, detour: float = 0.0, w_floor: float = 1e-12, w_ceiling: float = 1e12) -> Trajectory:
    """Integrate from ``s0`` to ``z1`` along :func:`log_path`.

    ``zeta`` is carried along by quadrature of ``d zeta/d log z = -z/w``
    starting from ``zeta0`` (the Hamiltonian value by default), which makes
    the ``zeta`` form of the equation an independent check on the flow.
    Leaving ``w_floor < |w| < w_ceiling`` stops the run and returns the
    partial trajectory with ``complete=False``.
    """
    cfg = cfg or NumericSettings()
    if s0.w == 0:
        raise SingularPointError(f"w = 0 at z = {s0.z}")
    if not z1 > 0:
        raise ValueError("z1 must be positive")
    zeta0 = s0.zeta if zeta0 is None else complex(zeta0)
    path, dpath = log_path(s0.z, z1, detour)

    def field_s(s, y):
        t = path(s)
        return _log_field(np.exp(t), y) * dpath(s)

    def near_zero(s, y):
        return abs(y[0]) - w_floor

    def near_pole(s, y):
        return w_ceiling - abs(y[0])

    near_zero.terminal = near_pole.terminal = True
    span = abs(dpath(0.0)) or 1.0
    sol = solve_ivp(
        field_s, (0.0, 1.0), np.array([s0.w, s0.p, zeta0], dtype=complex),
        method="DOP853", rtol=cfg.rtol, atol=cfg.atol, max_step=cfg.max_step / span,
        dense_output=True, events=(near_zero, near_pole),
    )
    complete = sol.status == 0
    message = sol.message
    if sol.status == 1:
        hit = [ev[0] for ev in sol.t_events if len(ev)][0]
        message = f"movable singularity of w near z = {complex(np.exp(path(hit))):.6g}"
    elif sol.status == -1:
        here = complex(np.exp(path(sol.t[-1]))) if len(sol.t) else s0.z
        message = f"step-size collapse near z = {here:.6g}: {sol.message}"
    zs = np.exp(np.array([path(s) for s in sol.t]))
    return Trajectory(sol.t, zs, sol.y[0], sol.y[1], sol.y[2], complete, message,
                      sol.nfev, detour, sol.sol, path)


def integrate_avoiding(s0: HamState, z1: float, cfg: NumericSettings | None = None,
                       detours=(0.0, 0.5, -0.5, 1.0), **kw) -> tuple[Trajectory, list[str]]:
    """Try the real path first, then complex detours; report every singularity met."""
    notes = []
    for h in detours:
        traj = integrate(s0, z1, cfg, detour=h, **kw)
        if traj.complete:
            return traj, notes
        notes.append(f"detour={h}: {traj.message}")
    return traj, notes


def zeta_form_residual(z, w, p, zeta):
    """Relative residual of ``(z zeta'')^2 = 4 zeta'^2 (zeta - z zeta') - 4 zeta'``.

    Dots are ``d/dz``: ``zeta' = -1/w`` and ``zeta'' = 2p/z`` follow from the
    flow, while ``zeta`` is the independently integrated value.
    """
    d1 = -1 / w
    d2 = 2 * p / z
    lhs = (z * d2) ** 2
    right = 4 * d1 * d1 * (zeta - z * d1) - 4 * d1
    scale = max(abs(lhs), abs(4 * d1 * d1 * zeta), abs(4 * d1), 1e-300)
    return abs(lhs - right) / scale


# -- series side --------------------------------------------------------

def _euler_moments(tau, z: complex):
    """``(theta^k tau)/tau`` for k = 1, 2, 3, with ``theta = z d/dz``."""
    t0 = tau.evaluate(z, 0)
    return [tau.evaluate(z, k) / t0 for k in (1, 2, 3)]


def series_zeta(tau, z: complex):
    """``(zeta, d zeta/dz, d^2 zeta/dz^2)`` from a tau series."""
    m1, m2, m3 = _euler_moments(tau, z)
    zeta = m1
    th1 = m2 - m1 * m1
    th2 = m3 - 3 * m2 * m1 + 2 * m1 ** 3
    return zeta, th1 / z, (th2 - th1) / (z * z)


def _truncation_estimate(tau, z: float) -> float:
    """Relative size of the top unit of exponents retained in the series."""
    top = tau.cap - 1
    total = 0.0
    tail = 0.0
    for e, v in tau.combined.items():
        term = abs(_to_complex(v) * z ** float(e))
        total += term
        if e > top:
            tail += term
    return tail / total if total else math.inf


def _to_complex(v) -> complex:
    if hasattr(v, "a"):
        if v.c or v.d:
            return complex(v)
        return complex(float(v.a), float(v.b))
    return float(v)


def series_initial_state(sigma, stilde, z0: float, order=12, window=None,
                         tol: float = 1e-10) -> tuple[HamState, complex, dict]:
    """``(w, p)`` at ``z0`` from the tau series, with the series ``zeta``.

    Refuses when the top retained exponents still contribute more than
    ``tol`` relative to the whole sum.
    """
    tau = tau_series(sigma, stilde, order, window)
    est = _truncation_estimate(tau, z0)
    if est > tol:
        raise TruncationTooLarge(
            f"series truncation estimate {est:.3g} exceeds {tol:.1g} at z0={z0}; "
            f"use a smaller z0 or an order above {order}"
        )
    zeta, d1, d2 = series_zeta(tau, z0)
    state = HamState(z0, complex(-1 / d1), complex(z0 * d2 / 2))
    info = {"truncation_estimate": est, "cap": tau.cap, "window": [min(tau.window), max(tau.window)]}
    return state, complex(zeta), info


@dataclass
class NumericReport:
    check: str
    params: dict
    ok: bool
    metrics: dict
    bounds: dict
    timing: float
    notes: list = field(default_factory=list)
    precision: int = 53

    def to_json_obj(self) -> dict:
        return {
            "check": self.check,
            "params": {k: str(v) for k, v in self.params.items()},
            "ok": bool(self.ok),
            "precision": self.precision,
            "metrics": {k: _fmt(v) for k, v in self.metrics.items()},
            "bounds": {k: _fmt(v) for k, v in self.bounds.items()},
            "timing": round(self.timing, 6),
            "notes": list(self.notes),
        }

    def summary(self) -> str:
        head = "PASS" if self.ok else "FAIL"
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{head} {self.check}({inner}) [{self.timing:.2f}s]"


def _fmt(v):
    if isinstance(v, float):
        return float(f"{v:.6e}")
    return v


def compare_series_ode(sigma, stilde, z0: float = 0.01, z1: float = 0.25,
                       cfg: NumericSettings | None = None, order=12, window=None,
                       n_checkpoints: int = 41, bounds: dict | None = None,
                       detours=(0.0, 0.5, -0.5, 1.0)) -> NumericReport:
    """Integrate the series state at ``z0`` to ``z1`` and compare along the way.

    The tau function and its Backlund partner are integrated along the same
    path; when either meets a movable singularity on the real segment the
    pair is rerouted through the complex plane (the series is evaluated on
    the principal branch there).  Metrics: the largest relative deviation
    of ``zeta`` from the series, ``|w w_1 - z|``, the largest ``zeta``-form
    residual and ``|zeta' zeta_1' / z - 1|``.
    """
    import time

    cfg = cfg or NumericSettings()
    sigma, stilde = Fraction(sigma), Fraction(stilde)
    bounds = dict(bounds or {})
    bounds.setdefault("zeta_rel_dev", 1e-6)
    bounds.setdefault("backlund_product", 1e-8)
    bounds.setdefault("zeta_form_residual", 10 * cfg.rtol)
    start = time.perf_counter()
    s0, zeta0, info = series_initial_state(sigma, stilde, z0, order, window)
    s1, st1 = backlund_parameters(sigma, stilde)
    partner_series, _, _ = series_initial_state(s1, st1, z0, order)
    partner0 = backlund(s0)
    notes = []
    for h in detours:
        traj = integrate(s0, z1, cfg, zeta0=zeta0, detour=h)
        traj1 = integrate(partner0, z1, cfg, detour=h)
        if traj.complete and traj1.complete:
            break
        notes.extend(f"detour={h}: {t.message}" for t in (traj, traj1) if not t.complete)
    tau = tau_series(sigma, stilde, order, window)
    dev = prod = resid = profd = 0.0
    # local error control holds at accepted steps; the interpolant is looser
    for z, w, p, zt in traj.rows():
        resid = max(resid, zeta_form_residual(z, w, p, zt))
    for z, _, _, zt in traj.sample(n_checkpoints):
        zser = series_zeta(tau, z)[0]
        dev = max(dev, abs(zt - zser) / abs(zser))
    for (z, w, _, _), (_, w1, _, _) in zip(traj.sample(n_checkpoints), traj1.sample(n_checkpoints)):
        prod = max(prod, abs(w * w1 - z))
        profd = max(profd, abs((z / w) * (z / w1) / z - 1))
    metrics = {
        "zeta_rel_dev": dev,
        "backlund_product": prod,
        "zeta_form_residual": resid,
        "profd": profd,
        "partner_state_mismatch": max(abs(partner0.w - partner_series.w) / abs(partner0.w),
                                      abs(partner0.p - partner_series.p) / abs(partner0.p)),
        "truncation_estimate": info["truncation_estimate"],
        "detour": traj.detour,
        "nfev": traj.nfev + traj1.nfev,
    }
    complete = traj.complete and traj1.complete
    ok = complete and all(metrics[k] <= b for k, b in bounds.items())
    return NumericReport(
        "ode-compare",
        {"sigma": sigma, "stilde": stilde, "z0": z0, "z1": z1, "rtol": cfg.rtol, "order": order},
        ok, metrics, bounds, time.perf_counter() - start, notes,
    )


def check_algebraic(sign: int, z0: float = 0.01, z1: float = 1.0,
                    cfg: NumericSettings | None = None, bound: float = 1e-10,
                    n_checkpoints: int = 50) -> NumericReport:
    """Integrate ``w = sign sqrt z`` from ``z0`` and measure the drift on ``[z0, z1]``."""
    import time

    cfg = cfg or NumericSettings()
    start = time.perf_counter()
    s0 = algebraic_state(z0, sign)
    traj = integrate(s0, z1, cfg)
    dev = 0.0
    for z, w, p, _ in traj.sample(n_checkpoints):
        exact = algebraic_state(z.real, sign)
        dev = max(dev, abs(w - exact.w), abs(p - exact.p) * math.sqrt(z.real))
    fixed = backlund(s0)
    metrics = {
        "max_deviation": dev,
        "backlund_fixed_point": max(abs(fixed.w - s0.w), abs(fixed.p - s0.p)),
        "nfev": traj.nfev,
    }
    ok = traj.complete and dev <= bound and metrics["backlund_fixed_point"] <= 1e-14
    return NumericReport(
        "ode-algebraic", {"sign": "+" if sign > 0 else "-", "z0": z0, "z1": z1, "rtol": cfg.rtol},
        ok, metrics, {"max_deviation": bound}, time.perf_counter() - start,
        [] if traj.complete else [traj.message],
    )


def convergence_study(rtols=(1e-6, 1e-8, 1e-10, 1e-12), orders=(8, 10, 12, 14),
                      sigma=Fraction(3, 10), stilde=Fraction(1)) -> dict:
    """Error against tolerance on the algebraic solution and against order on the series.

    The algebraic rows measure integrator error directly.  The series rows
    fix ``rtol = 1e-13`` and vary the truncation order, giving the
    achievable ``zeta`` deviation on ``[0.01, 0.25]``.
    """
    algebraic = []
    for rtol in rtols:
        rep = check_algebraic(1, cfg=NumericSettings(rtol=rtol, atol=rtol * 1e-2), bound=math.inf)
        algebraic.append({"rtol": rtol, "max_deviation": rep.metrics["max_deviation"],
                          "nfev": rep.metrics["nfev"]})
    series = []
    for order in orders:
        rep = compare_series_ode(sigma, stilde, cfg=NumericSettings(rtol=1e-13, atol=1e-15),
                                 order=order, bounds={})
        series.append({"order": order,
                       "zeta_rel_dev": rep.metrics["zeta_rel_dev"],
                       "truncation_estimate": rep.metrics["truncation_estimate"]})
    return {"algebraic": algebraic, "series": series}
