"""Tau functions of Painleve III(D8) as Fourier sums of c = 1 Whittaker blocks.

    tau(sigma, s | z) ~ sum_n Ct(sigma, n) s**n F((sigma + n)**2 | z)

with ``Ct`` the rational structure constants below and ``F`` the c = 1
irregular block.  The verifiers check the bilinear identities coefficient by
coefficient in exact arithmetic, one power of ``s`` at a time.
"""
from __future__ import annotations

from fractions import Fraction
from math import floor

from .combinatorics import hook_lengths
from .report import Report, residual_terms, stopwatch
from .series import ExponentKeyedSum, GradedSeries, exp_sqrt, hirota
from .virasoro import block_coefficients

__all__ = [
    "ResonantSigmaError",
    "WindowTooSmallError",
    "c_ratio",
    "TauSeries",
    "tau_series",
    "tau_half_series",
    "backlund_parameters",
    "verify_tau3",
    "verify_toda_c1",
    "verify_okamoto_c1",
    "b_n",
    "verify_blockquarter",
    "verify_hook_bn",
    "verify_backlund_profd",
    "verify_bridge",
]

HALF = Fraction(1, 2)


class ResonantSigmaError(ValueError):
    """sigma in (1/2)Z, or a vanishing factor in the structure constants."""


class WindowTooSmallError(ValueError):
    """An explicit ladder window omits terms that reach the requested order."""


def _check_sigma(sigma) -> Fraction:
    sigma = Fraction(sigma)
    if (2 * sigma).denominator == 1:
        raise ResonantSigmaError(f"resonant sigma {sigma}: must avoid (1/2)Z")
    return sigma


def c_ratio(sigma, n) -> Fraction:
    """Rational structure constant ``Ct(sigma, n)`` for ``2n`` integral.

    For ``n >= 0``: ``(-1)^floor(n) / ((2s)^{2n} prod_{i=1}^{2n-1} (2s+i)^{2(2n-i)})``.
    For ``n < 0`` the same expression with ``s -> -s`` and ``n -> -n``, which
    keeps ``Ct(-s, -n) = Ct(s, n)`` and the Barnes-G shift law intact.
    """
    sigma = _check_sigma(sigma)
    n = Fraction(n)
    if (2 * n).denominator != 1:
        raise ValueError(f"shift must be in (1/2)Z, got {n}")
    if n < 0:
        sigma, n = -sigma, -n
    m = int(2 * n)
    den = (2 * sigma) ** m
    for i in range(1, m):
        den *= (2 * sigma + i) ** (2 * (m - i))
    if den == 0:
        raise ResonantSigmaError(f"pole of Ct at sigma={sigma}, n={n}")
    return Fraction((-1) ** (floor(n) % 2)) / den


def _block(delta, order) -> GradedSeries:
    levels = max(0, floor(order))
    return GradedSeries.from_list(delta, block_coefficients(1, delta, levels)).truncate(
        Fraction(order) if order >= 0 else 0
    )


class TauSeries:
    """Truncated tau series: per-ladder blocks plus their weighted sum."""

    def __init__(self, sigma, stilde, cap, window, per_n, combined, collisions):
        self.sigma = sigma
        self.stilde = stilde
        self.cap = cap
        self.window = window
        self.per_n = per_n
        self.combined = combined
        self.collisions = collisions

    @property
    def leading_exponent(self) -> Fraction:
        return min((self.sigma + n) ** 2 for n in self.window)

    def metadata(self) -> dict:
        return {
            "sigma": self.sigma,
            "stilde": self.stilde,
            "cap": self.cap,
            "window": [min(self.window), max(self.window)],
            "normalization": "Ct(sigma,0)=1: leading coefficient 1 at z^(sigma^2)",
            "exponent_collisions": self.collisions,
        }

    def zeta(self) -> ExponentKeyedSum:
        """``z d/dz log tau`` to the trusted cap."""
        return self.combined.log_derivative()

    def evaluate(self, z: complex, derivative: int = 0):
        """Floating value of ``(z d/dz)**derivative tau`` at ``z`` (principal powers)."""
        total = 0.0
        for e, v in self.combined.items():
            coeff = complex(float(v.a), float(v.b)) if hasattr(v, "a") else float(v)
            total += coeff * float(e) ** derivative * z ** float(e)
        return total


def tau_series(sigma, stilde, order, window=None) -> TauSeries:
    """Tau series trusted through ``z**(lowest exponent + order)``.

    With ``window=None`` the ladder is chosen automatically: every ``n`` whose
    leading exponent ``(sigma+n)^2`` lies within the cap.  An explicit
    ``(lo, hi)`` window that omits such terms is refused.
    """
    sigma = _check_sigma(sigma)
    stilde = Fraction(stilde)
    if stilde == 0:
        raise ValueError("stilde must be nonzero")
    order = Fraction(order)
    n0 = -round(sigma)
    cap = (sigma + n0) ** 2 + order
    needed = []
    n = n0
    while (sigma + n) ** 2 <= cap:
        needed.append(n)
        n -= 1
    n = n0 + 1
    while (sigma + n) ** 2 <= cap:
        needed.append(n)
        n += 1
    needed.sort()
    if window is None:
        ns = needed
    else:
        lo, hi = int(window[0]), int(window[1])
        if lo > needed[0] or hi < needed[-1]:
            raise WindowTooSmallError(
                f"window [{lo}, {hi}] omits ladder terms needed through order {order}: "
                f"requires [{needed[0]}, {needed[-1]}]"
            )
        ns = list(range(lo, hi + 1))
    per_n = {}
    combined = ExponentKeyedSum({}, cap)
    seen = {}
    collisions = 0
    for n in ns:
        base = (sigma + n) ** 2
        if base > cap:
            continue
        blk = _block(base, cap - base)
        per_n[n] = blk
        weight = c_ratio(sigma, n) * stilde ** n
        # integer-step block: levels up to floor(cap - base) make it exact through cap
        terms = {base + k: weight * v for k, v in blk.coeffs.items()}
        combined = combined + ExponentKeyedSum(terms, cap)
        for k in blk.coeffs:
            e = base + k
            if e in seen and seen[e] != n:
                collisions += 1
            seen[e] = n
    return TauSeries(sigma, stilde, cap, ns, per_n, combined, collisions)


def backlund_parameters(sigma, stilde) -> tuple[Fraction, Fraction]:
    """Parameters of the Backlund partner: ``(1/2 - s, 1/((2s)^2 (1-2s)^2 st))``.

    Equivalent, by ``tau(-s, st) = tau(s, 1/st)``, to
    ``(s - 1/2, (2s)^2 (1-2s)^2 st)``.
    """
    sigma = _check_sigma(sigma)
    stilde = Fraction(stilde)
    return HALF - sigma, 1 / ((2 * sigma) ** 2 * (1 - 2 * sigma) ** 2 * stilde)


def tau_half_series(sigma, stilde, order, window=None) -> TauSeries:
    """Backlund partner of :func:`tau_series`."""
    s1, st1 = backlund_parameters(sigma, stilde)
    return tau_series(s1, st1, order, window)


# -- per-power identities ----------------------------------------------

def _pair_terms(sigma, pairs, order):
    """Prepare (coefficient, F_a, F_b, base) for ladder pairs within the cap."""
    bases = {p: (sigma + p[0]) ** 2 + (sigma + p[1]) ** 2 + p[2] for p in pairs}
    low = min(bases.values())
    cap = low + order
    out = []
    for p in pairs:
        a, b, extra = p
        if bases[p] > cap:
            continue
        room = cap - bases[p]
        fa = _block((sigma + a) ** 2, room)
        fb = _block((sigma + b) ** 2, room)
        out.append((c_ratio(sigma, a) * c_ratio(sigma, b), fa, fb, extra))
    return out, low, cap


def _accumulate(terms, base_cap, combine):
    acc = None
    for cc, fa, fb, extra in terms:
        piece = combine(fa, fb, extra).scale(cc)
        acc = piece if acc is None else acc + piece
    return acc


def _report(name, params, order, resid: GradedSeries, cap, sw, details=None) -> Report:
    res = residual_terms(resid, cap)
    return Report(name, params, Fraction(order), not res, res, sw["elapsed"], details=details or {})


def verify_tau3(sigma, order, m_values=(-1, 0, 1, 2), stilde=1) -> Report:
    """Fourth-order bilinear tau equation, one power ``s**m`` at a time.

    ``sum_n Ct(n+m) Ct(-n) [1/2 D^4 - (z d/dz) D^2 + 1/2 D^2 + 2 z D^0](F_{n+m}, F_{-n}) = 0``
    """
    sigma = _check_sigma(sigma)
    order = Fraction(order)
    parts = []
    with stopwatch() as sw:
        for m in m_values:
            m = Fraction(m)
            pairs = [(a, m - a, 0) for a in _ints_near(sigma, m, order)]
            terms, low, cap = _pair_terms(sigma, pairs, order)

            def comb(fa, fb, _):
                d4 = hirota(4, 1, -1, 0, fa, fb)
                d2 = hirota(2, 1, -1, 0, fa, fb)
                d0 = hirota(0, 1, 1, 0, fa, fb)
                return d4.scale(HALF) - d2.euler() + d2.scale(HALF) + d0.shift(1).scale(2)

            resid = _accumulate(terms, cap, comb)
            res = residual_terms(resid, cap)
            parts.append((m, res, len(terms)))
    residuals = [r for _, res, _ in parts for r in res]
    return Report(
        "tau3", {"sigma": sigma, "stilde": Fraction(stilde)}, order, not residuals, residuals,
        sw["elapsed"], details={"per_m": {str(m): {"ok": not res, "pairs": k} for m, res, k in parts}},
    )


def verify_toda_c1(sigma, order, m_values=(0, 1)) -> Report:
    """``sum_n Ct(n+m)Ct(-n) 1/2 D^2(F_{n+m},F_{-n}) + Ct(n+m+1/2)Ct(-n-1/2) z^{1/2} F F = 0``."""
    sigma = _check_sigma(sigma)
    order = Fraction(order)
    parts = []
    with stopwatch() as sw:
        for m in m_values:
            m = Fraction(m)
            first = [(a, m - a, 0) for a in _ints_near(sigma, m, order)]
            second = [(a + HALF, m - a - HALF, HALF) for a in _ints_near(sigma, m, order, HALF)]
            terms, low, cap = _pair_terms(sigma, first + second, order)

            def comb(fa, fb, extra):
                if extra:
                    return hirota(0, 1, 1, 0, fa, fb).shift(HALF)
                return hirota(2, 1, -1, 0, fa, fb).scale(HALF)

            resid = _accumulate(terms, cap, comb)
            parts.append((m, residual_terms(resid, cap), len(terms)))
    residuals = [r for _, res, _ in parts for r in res]
    return Report(
        "toda-c1", {"sigma": sigma}, order, not residuals, residuals, sw["elapsed"],
        details={"per_m": {str(m): {"ok": not res, "pairs": k} for m, res, k in parts}},
    )


def _ints_near(sigma, total, order, shift=Fraction(0)):
    """Integers ``a`` with pair exponent (s+a+shift)^2 + (s+total-a-shift)^2 near the minimum."""
    cands = range(-80, 81)
    vals = {a: (sigma + a + shift) ** 2 + (sigma + total - a - shift) ** 2 for a in cands}
    best = min(vals.values())
    return [a for a in cands if vals[a] <= best + order + 1]


def verify_okamoto_c1(sigma, order) -> Report:
    """The two c = 1 Okamoto-like relations at ``s**0``.

    With pairs ``(F_n, F_{-n-1/2})`` weighted by ``Ct(n) Ct(-n-1/2)``:
    ``D^2 - 1/2 (z d/dz - 1/8)(F F) = 0`` and ``D^3 - 1/2 (z d/dz - 1/8) D^1 = 0``.
    """
    sigma = _check_sigma(sigma)
    order = Fraction(order)
    with stopwatch() as sw:
        pairs = [(a, -a - HALF, 0) for a in _ints_near(sigma, -HALF, order)]
        terms, low, cap = _pair_terms(sigma, pairs, order)
        eighth = Fraction(1, 8)

        def rel(k):
            def comb(fa, fb, _):
                hi = hirota(k + 2, 1, -1, 0, fa, fb)
                lo = hirota(k, 1, -1, 0, fa, fb)
                return hi - (lo.euler() - lo.scale(eighth)).scale(HALF)
            return comb

        r1 = residual_terms(_accumulate(terms, cap, rel(0)), cap)
        r2 = residual_terms(_accumulate(terms, cap, rel(1)), cap)
    return Report(
        "okamoto-c1", {"sigma": sigma}, order, not (r1 or r2), r1 + r2, sw["elapsed"],
        details={"relation-1": not r1, "relation-2": not r2, "pairs": len(terms)},
    )


# -- algebraic solution -------------------------------------------------

def b_n(n: int) -> Fraction:
    """Coefficient of ``F((1/4+n)^2)`` in the algebraic tau function."""
    n = int(n)
    den = 1
    if n >= 0:
        for i in range(2 * n):
            den *= (2 * i + 1) ** (2 * (2 * n - i))
    else:
        for i in range(-2 * n - 1):
            den *= (2 * i + 1) ** (2 * (-2 * n - i - 1))
    return Fraction(2) ** (4 * n * n + 2 * n) / den


def verify_blockquarter(sign: int, order=5) -> Report:
    """``sum_n (-sign)^n B_n F((1/4+n)^2) = z^{1/16} exp(-4 sign sqrt z)`` (sign = +-1)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    order = Fraction(order)
    base = Fraction(1, 16)
    cap = base + order
    with stopwatch() as sw:
        acc = exp_sqrt(-4 * sign, base, order).scale(-1)
        n = 0
        ns = []
        for n in range(-40, 41):
            if (Fraction(1, 4) + n) ** 2 <= cap:
                ns.append(n)
        for n in ns:
            lead = (Fraction(1, 4) + n) ** 2
            blk = _block(lead, cap - lead)
            acc = acc + blk.scale(Fraction(-sign) ** n * b_n(n))
        res = residual_terms(acc, cap)
    return Report("blockquarter", {"sign": "+" if sign > 0 else "-"}, order, not res, res,
                  sw["elapsed"], details={"ladder": ns})


def verify_hook_bn(n_max: int = 4) -> Report:
    """``B_n`` against the fermionic staircase formula and brute-force hook lengths."""
    rows = {}
    bad = []
    with stopwatch() as sw:
        for n in range(-n_max, n_max + 1):
            k = 2 * n if n >= 0 else -2 * n - 1
            big_n = k * (k + 1) // 2
            odd_prod = 1
            for i in range(k):
                odd_prod *= (2 * i + 1) ** (k - i)
            hooks = 1
            for h in hook_lengths(range(k, 0, -1)):
                hooks *= h
            via_products = Fraction(2 ** big_n, odd_prod) ** 2
            via_hooks = Fraction(2 ** big_n, 1) ** 2 / Fraction(hooks) ** 2
            ok = via_products == b_n(n) == via_hooks
            rows[str(n)] = {"B_n": b_n(n), "staircase": k, "ok": ok}
            if not ok:
                bad.append((Fraction(n), b_n(n) - via_products))
    return Report("hook-bn", {"n_max": n_max}, Fraction(0), not bad, bad, sw["elapsed"],
                  details=rows)


# -- Backlund partner ----------------------------------------------------

def verify_backlund_profd(sigma, stilde, order) -> Report:
    """``(z d/dz zeta) (z d/dz zeta_1) = z`` for ``zeta``, ``zeta_1`` of a tau/partner pair."""
    sigma = _check_sigma(sigma)
    stilde = Fraction(stilde)
    order = Fraction(order)
    with stopwatch() as sw:
        tau = tau_series(sigma, stilde, order)
        s1, st1 = backlund_parameters(sigma, stilde)
        tau1 = tau_series(s1, st1, order)
        dz = tau.zeta().euler()
        dz1 = tau1.zeta().euler()
        prod = dz * dz1
        resid = prod - ExponentKeyedSum({Fraction(1): Fraction(1)}, None)
        cap = prod.cap
        res = residual_terms(resid, cap)
    return Report(
        "backlund", {"sigma": sigma, "stilde": stilde}, order, not res, res, sw["elapsed"],
        details={"partner": {"sigma": s1, "stilde": st1}, "trusted_cap": cap},
    )


def verify_bridge(sigma, max_twice_n: int = 6) -> Report:
    """``Ct(s,n) Ct(s,-n)`` against the NS coefficient ``4^{-Delta}(-1)^{2n} l_n^2`` at c = 1.

    The NS coefficient is taken at ``b = i``, ``P = 2 i sigma`` with the
    ``beta**(-Delta)`` factors restored (``beta1 = beta2 = 1/4``).
    """
    from .blowup import EmbeddingParams, ln_squared_ns
    from .exact import I, pow_two, simplify

    sigma = _check_sigma(sigma)
    p = EmbeddingParams(I, 2 * I * sigma)
    rows = {}
    bad = []
    with stopwatch() as sw:
        for tn in range(1, max_twice_n + 1):
            n = Fraction(tn, 2)
            lhs = c_ratio(sigma, n) * c_ratio(sigma, -n)
            lsq = ln_squared_ns(p, n).value
            restored = simplify(lsq * pow_two(4 * n * n))  # 4^{Delta1 + Delta2 - Delta_NS}
            rhs = simplify(Fraction((-1) ** tn) * restored)
            ok = simplify(lhs - rhs) == 0
            rows[str(n)] = {"ct_product": lhs, "rhs": rhs, "ok": ok}
            if not ok:
                bad.append((n, simplify(lhs - rhs)))
    return Report("bridge", {"sigma": sigma}, Fraction(max_twice_n, 2), not bad, bad, sw["elapsed"],
                  details=rows)
