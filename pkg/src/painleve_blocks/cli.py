"""``pb``: command-line entry point.

Every subcommand prints JSON on stdout (CSV where ``--format csv`` is
offered).  Exit status: 0 all checks pass, 1 a residual or tolerance
failure, 2 usage or precondition error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .exact import parse_rational, parse_scalar, render
from .series import GradedSeries, TruncationError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rat(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _scalar(text: str):
    try:
        return parse_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rats(text: str) -> list[Fraction]:
    return [_rat(x) for x in text.split(",") if x.strip()]


def _sign(text: str) -> int:
    if text in ("+", "+1", "1", "plus"):
        return 1
    if text in ("-", "-1", "minus"):
        return -1
    raise argparse.ArgumentTypeError(f"sign must be + or -, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of floats, got {text!r}") from None


# -- rendering ----------------------------------------------------------

def series_string(s: GradedSeries) -> str:
    """``z^{base}`` times the bracketed sum, e.g. ``z^{1/3}*(1 + 3/2*z)``."""
    head = f"z^{{{render(s.base)}}}"
    terms = []
    for k in sorted(s.coeffs):
        v = render(s.coeffs[k])
        if " " in v:
            v = f"({v})"
        if k == 0:
            terms.append(v)
        else:
            power = "z" if k == 1 else f"z^{{{render(k)}}}"
            terms.append(power if v == "1" else f"{v}*{power}")
    if terms == ["1"]:
        return head
    return f"{head}*({' + '.join(terms)})" if terms else "0"


def series_obj(s: GradedSeries) -> dict:
    obj = s.to_json_obj()
    obj["series"] = series_string(s)
    return obj


def _emit(obj, fmt: str = "json", rows=None, header=None):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(header)
        writer.writerows(rows or [])
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")


# -- subcommands ---------------------------------------------------------

def cmd_block(a) -> int:
    from .virasoro import block_series

    s = block_series(a.c, a.delta, a.order)
    rows = [[render(k), render(v)] for k, v in sorted(s.coeffs.items())]
    _emit({"c": render(a.c), "delta": render(a.delta), "order": a.order, **series_obj(s)},
          a.format, rows, ["step", "coefficient"])
    return EXIT_OK


def cmd_nsr_block(a) -> int:
    from .nsr import NSRModule

    s = NSRModule(a.c, a.p, a.sector).block_series(a.order, a.tower)
    rows = [[render(k), render(v)] for k, v in sorted(s.coeffs.items())]
    _emit({"c_nsr": render(a.c), "P": render(a.p), "sector": a.sector, "tower": a.tower,
           "delta": render(s.base), "order": render(a.order), **series_obj(s)}, a.format, rows, ["step", "coefficient"])
    return EXIT_OK


def cmd_tau(a) -> int:
    from .numeric import series_zeta
    from .report import _jsonable
    from .kiev import tau_series

    window = tuple(a.window) if a.window else None
    tau = tau_series(a.sigma, a.stilde, a.order, window)
    terms = [[render(e), render(v)] for e, v in tau.combined.items()]
    obj = {
        "metadata": _jsonable(tau.metadata()),
        "order": render(Fraction(a.order)),
        "terms": terms,
        "zeta": [[render(e), render(v)] for e, v in tau.zeta().items()],
    }
    rows = terms
    if a.eval_at:
        evals = []
        for z in a.eval_at:
            if z <= 0:
                raise ValueError(f"evaluation points must be positive, got {z}")
            zeta, _, _ = series_zeta(tau, z)
            t = tau.evaluate(z)
            evals.append({"z": z, "tau": [t.real, t.imag] if isinstance(t, complex) else [t, 0.0],
                          "zeta": [zeta.real, zeta.imag] if isinstance(zeta, complex) else [zeta, 0.0]})
        obj["evaluations"] = evals
        obj["precision"] = 53
    _emit(obj, a.format, rows, ["exponent", "coefficient"])
    return EXIT_OK


def cmd_ln(a) -> int:
    from .blowup import EmbeddingParams, ln_squared_ns, ln_squared_r

    p = EmbeddingParams(a.b, a.p)
    fn = ln_squared_ns if a.sector == "ns" else ln_squared_r
    out = []
    for n in a.n:
        lsq = fn(p, n)
        out.append({"n": render(n), "l2": render(lsq.value),
                    "two_power_ledger": render(lsq.two_power_ledger),
                    "normalization": lsq.normalization})
    _emit({"b": render(a.b), "P": render(a.p), "sector": a.sector, "values": out}, a.format,
          [[r["n"], r["l2"], r["two_power_ledger"]] for r in out], ["n", "l2", "two_power_ledger"])
    return EXIT_OK


def _need(a, *names):
    missing = [n for n in names if getattr(a, n) is None]
    if missing:
        raise UsageError(f"verify {a.check}: missing --{', --'.join(m.replace('_', '-') for m in missing)}")


def run_verify(a):
    from . import blowup, kiev, virasoro

    c = a.check
    if c == "tau3":
        _need(a, "sigma")
        return kiev.verify_tau3(a.sigma, a.order or 8, tuple(a.m or (-1, 0, 1, 2)),
                                a.stilde if a.stilde is not None else 1)
    if c == "toda-c1":
        _need(a, "sigma")
        return kiev.verify_toda_c1(a.sigma, a.order or 8, tuple(a.m or (0, 1)))
    if c == "okamoto-c1":
        _need(a, "sigma")
        return kiev.verify_okamoto_c1(a.sigma, a.order or 8)
    if c == "blockquarter":
        _need(a, "sign")
        return kiev.verify_blockquarter(a.sign, a.order if a.order is not None else 5)
    if c == "hook-bn":
        return kiev.verify_hook_bn(a.n_max)
    if c == "backlund":
        _need(a, "sigma", "stilde")
        return kiev.verify_backlund_profd(a.sigma, a.stilde, a.order or 6)
    if c == "bridge":
        _need(a, "sigma")
        return kiev.verify_bridge(a.sigma, a.max_twice_n)
    if c == "block-sanity":
        return virasoro.verify_block_sanity(a.delta if a.delta is not None else Fraction(9, 100))
    _need(a, "b", "p")
    p = blowup.EmbeddingParams(a.b, a.p)
    if c == "blowup-ns":
        return blowup.verify_todablock(p, a.order or 6, a.window)
    if c == "blowup-r":
        return blowup.verify_okamoto_r(p, a.order or 10,
                                       a.window if a.window is not None else Fraction(9, 4))
    if c == "hatf-ns":
        return blowup.verify_hatf(p, "ns", a.order or 4)
    if c == "hatf-r":
        return blowup.verify_hatf(p, "r", a.order or 4)
    raise UsageError(f"unknown check {c!r}")


VERIFY_CHECKS = ("tau3", "toda-c1", "okamoto-c1", "blockquarter", "hook-bn", "backlund",
                 "blowup-ns", "blowup-r", "hatf-ns", "hatf-r", "bridge", "block-sanity")


def cmd_verify(a) -> int:
    rep = run_verify(a)
    if a.format == "csv":
        _emit(None, "csv", [[render(e), render(v)] for e, v in rep.residuals],
              ["exponent", "residual"])
    else:
        _emit(rep.to_json_obj())
    if not a.quiet:
        print(rep.summary(), file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_FAIL


def _dump_trajectory(traj, path, columns: bool):
    header = ["z_re", "z_im", "w_re", "w_im", "p_re", "p_im", "zeta_re", "zeta_im"]
    rows = []
    for z, w, p, zt in traj.rows():
        rows.append([f"{x:.17g}" for x in (z.real, z.imag, w.real, w.imag, p.real, p.imag,
                                            zt.real, zt.imag)])
    with open(path, "w", newline="") as fh:
        if columns:
            fh.write("# " + " ".join(header) + "\n")
            for r in rows:
                fh.write(" ".join(r) + "\n")
        else:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)


def cmd_ode(a) -> int:
    from . import numeric

    cfg = numeric.NumericSettings(rtol=a.rtol, atol=a.atol if a.atol else a.rtol * 1e-2)
    if a.ode_cmd == "compare":
        rep = numeric.compare_series_ode(a.sigma, a.stilde, a.z0, a.z1, cfg, order=a.order)
        if a.dump:
            s0, zeta0, _ = numeric.series_initial_state(a.sigma, a.stilde, a.z0, a.order)
            traj = numeric.integrate(s0, a.z1, cfg, zeta0=zeta0, detour=rep.metrics["detour"])
            _dump_trajectory(traj, a.dump, a.gnuplot)
    else:
        rep = numeric.check_algebraic(a.sign, a.z0, a.z1, cfg)
        if a.dump:
            traj = numeric.integrate(numeric.algebraic_state(a.z0, a.sign), a.z1, cfg)
            _dump_trajectory(traj, a.dump, a.gnuplot)
    _emit(rep.to_json_obj())
    if not a.quiet:
        print(rep.summary(), file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_suite(a) -> int:
    from .suite import run_suite

    progress = None
    if not a.quiet:
        def progress(row):
            status = "PASS" if row["ok"] else ("FINDING" if row["finding"] else "FAIL")
            print(f"[{row['criterion']:>2}] {status:<7} {row['label']} ({row['timing']:.2f}s)",
                  file=sys.stderr)
    res = run_suite(a.name, fault=a.inject_fault, seed=a.seed, criteria=a.criteria,
                    progress=progress)
    if a.table:
        sys.stdout.write(res.table() + "\n")
    else:
        _emit(res.to_json_obj(timing=not a.no_timing))
    return EXIT_OK if res.ok else EXIT_FAIL


# -- parser -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pb", description="Exact conformal blocks and Painleve III(D8) tau functions.")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.required = True
    fmt = {"choices": ("json", "csv"), "default": "json"}

    b = sub.add_parser("block", help="Virasoro Whittaker block")
    b.add_argument("--c", type=_scalar, required=True)
    b.add_argument("--delta", type=_scalar, required=True)
    b.add_argument("--order", type=int, required=True)
    b.add_argument("--format", **fmt)
    b.set_defaults(fn=cmd_block)

    n = sub.add_parser("nsr-block", help="super-Virasoro Whittaker block")
    n.add_argument("--cnsr", "--c", dest="c", type=_scalar, required=True,
                   help="NSR central charge")
    n.add_argument("--p", type=_scalar, required=True, help="momentum P")
    n.add_argument("--sector", choices=("ns", "r"), required=True)
    n.add_argument("--order", type=_rat, required=True)
    n.add_argument("--tower", type=_sign, default=1)
    n.add_argument("--format", **fmt)
    n.set_defaults(fn=cmd_nsr_block)

    t = sub.add_parser("tau", help="tau series as a sum of c = 1 blocks")
    t.add_argument("--sigma", type=_rat, required=True)
    t.add_argument("--stilde", type=_rat, required=True)
    t.add_argument("--order", type=_rat, required=True)
    t.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    t.add_argument("--eval-at", type=_floats, help="positive z values, comma or space separated")
    t.add_argument("--format", **fmt)
    t.set_defaults(fn=cmd_tau)

    ln = sub.add_parser("ln", help="blowup coefficients l_n^2")
    ln.add_argument("--b", type=_scalar, required=True)
    ln.add_argument("--p", type=_scalar, required=True)
    ln.add_argument("--sector", choices=("ns", "r"), required=True)
    ln.add_argument("--n", type=_rats, required=True,
                    help="ladder indices, comma separated (use --n=-1/4,... for a leading minus)")
    ln.add_argument("--format", **fmt)
    ln.set_defaults(fn=cmd_ln)

    v = sub.add_parser("verify", help="run one exact identity check")
    v.add_argument("check", choices=VERIFY_CHECKS)
    v.add_argument("--sigma", type=_rat)
    v.add_argument("--stilde", type=_rat)
    v.add_argument("--order", type=_rat)
    v.add_argument("--m", type=_ints, help="s-powers, comma separated")
    v.add_argument("--sign", type=_sign)
    v.add_argument("--b", type=_scalar)
    v.add_argument("--p", type=_scalar)
    v.add_argument("--window", type=_rat, help="cap on |n| for blowup ladders")
    v.add_argument("--n-max", type=int, default=4)
    v.add_argument("--max-twice-n", type=int, default=6)
    v.add_argument("--delta", type=_rat)
    v.add_argument("--format", **fmt)
    v.add_argument("--quiet", action="store_true")
    v.set_defaults(fn=cmd_verify)

    o = sub.add_parser("ode", help="numeric integration of the Hamiltonian system")
    osub = o.add_subparsers(dest="ode_cmd", parser_class=_Parser)
    osub.required = True
    oc = osub.add_parser("compare", help="series state integrated and compared with the series")
    oc.add_argument("--sigma", type=_rat, required=True)
    oc.add_argument("--stilde", type=_rat, required=True)
    oc.add_argument("--z0", type=float, default=0.01)
    oc.add_argument("--z1", type=float, default=0.25)
    oc.add_argument("--order", type=int, default=12)
    oa = osub.add_parser("algebraic", help="the w = +-sqrt(z) solutions")
    oa.add_argument("--sign", type=_sign, required=True)
    oa.add_argument("--z0", type=float, default=0.01)
    oa.add_argument("--z1", type=float, default=1.0)
    for sp in (oc, oa):
        sp.add_argument("--rtol", type=float, default=1e-12)
        sp.add_argument("--atol", type=float)
        sp.add_argument("--dump", metavar="PATH", help="write the trajectory as CSV")
        sp.add_argument("--gnuplot", action="store_true", help="whitespace columns for --dump")
        sp.add_argument("--quiet", action="store_true")
    o.set_defaults(fn=cmd_ode)

    s = sub.add_parser("suite", help="run the acceptance matrix")
    s.add_argument("name", nargs="?", default="paper-all")
    s.add_argument("--inject-fault", choices=("l2-sign",), help="test mode: deliberate error")
    s.add_argument("--criteria", type=_ints, help="restrict to these criterion numbers")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--table", action="store_true", help="plain summary table instead of JSON")
    s.add_argument("--no-timing", action="store_true", help="omit timings (for diffing runs)")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(fn=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "cmd", None) == "suite" and args.seed is None:
            from .properties import DEFAULT_SEED

            args.seed = DEFAULT_SEED
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, TruncationError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
