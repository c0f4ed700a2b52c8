"""Command-line interface: ``slowbond <subcommand> [options]``.

Every subcommand writes one JSON or CSV document (``--format``) to ``--out``
(stdout by default) with a metadata header.  The exit status is 0 when every
check the command performs passes, 1 when a check fails and 2 on a usage
error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

import numpy as np

from .algebra.rational import decimal_matches, format_rational, parse_rational, round_decimal, truncate_decimal
from .model import Geometry
from .output import dump_csv, dump_json, default_precision, metadata, write_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# -- argument helpers -----------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ArithmeticError):
        raise argparse.ArgumentTypeError(f"expected a rational such as 1, 0.5 or 3/2, got {text!r}") from None


def _pair(text: str) -> tuple[int, int]:
    v = _int_list(text)
    if len(v) != 2 or v[0] >= v[1]:
        raise argparse.ArgumentTypeError(f"expected lo,hi with lo < hi, got {text!r}")
    return v[0], v[1]


def _zero_window(text: str):
    kind, _, rest = text.partition(":")
    vals = _float_list(rest) if rest else []
    if kind == "disc" and len(vals) == 1:
        return ("disc", vals[0])
    if kind == "box" and len(vals) == 2:
        return ("box", vals[0], vals[1])
    raise argparse.ArgumentTypeError("window must be disc:R or box:A,B")


def _geometry(args) -> Geometry:
    if args.L is None:
        raise UsageError("--L is required")
    if args.geometry == "ring":
        return Geometry.ring(args.L)
    return Geometry.interval(args.L, args.alpha, args.beta)


def _precision(args) -> int:
    bits = args.precision_bits if args.precision_bits is not None else default_precision()
    if bits < 53:
        raise UsageError("--precision-bits must be at least 53")
    return bits


def _emit(args, meta, body, columns, rows):
    if args.format == "csv":
        if columns is None:
            raise UsageError(f"{meta['command']} has no CSV form; use --format json")
        text = dump_csv(meta, columns, rows)
    else:
        text = dump_json(meta, body)
    write_text(text, args.out)


def _cx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _series_input(args, precision):
    """Current coefficients from an ``expand`` JSON file, or the published table."""
    from .algebra.series import FloatSeries
    from .analysis import table_series
    from .output import load_json

    if not args.input:
        return table_series(precision), "published table"
    with open(args.input, encoding="utf-8") as fh:
        _, doc = load_json(fh.read())
    cs = [parse_rational(c["exact"]) for c in doc["c"]]
    import mpmath

    with mpmath.workprec(precision):
        return FloatSeries([mpmath.mpf(c.numerator) / c.denominator for c in cs], precision), args.input


# -- subcommands ------------------------------------------------------------------


def cmd_expand(args) -> int:
    from .series_engine import coefficient_table

    g = _geometry(args)
    method = args.method
    if method == "auto":
        method = "modular" if g.n_states > 20000 else "exact"
    sites = args.sites if args.sites is not None else list(range(1, min(5, g.L) + 1))
    table = coefficient_table(g, args.order, sites=sites, method=method)
    body = table.to_json(digits=20)
    meta = metadata("expand", method=method)
    rows = [["c", e["k"], e["exact"], e["decimal"]] for e in body["c"]]
    for site, entries in body["d"].items():
        rows += [[f"d{site}", e["k"], e["exact"], e["decimal"]] for e in entries]
    _emit(args, meta, body, ["observable", "k", "exact", "decimal"], rows)
    return EXIT_OK


def cmd_exact(args) -> int:
    from .exact_solver import current_rational, denominator_zeros

    g = _geometry(args)
    bits = _precision(args)
    cr = current_rational(g)
    zeros, near = denominator_zeros(cr, bits, args.window)
    body = cr.to_json()
    body.update({
        "degree": [cr.P.degree, cr.Q.degree],
        "window": list(args.window),
        "zeros": [_cx(z) for z in zeros],
        "near": [_cx(z) for z in near],
        "near_count": len(near),
    })
    near_set = {tuple(_cx(z)) for z in near}
    rows = [[*_cx(z), g.L, int(tuple(_cx(z)) in near_set)] for z in zeros]
    _emit(args, metadata("exact", bits), body, ["re", "im", "L", "in_window"], rows)
    return EXIT_OK


def cmd_semi(args) -> int:
    from .algebra.roots import poly_roots
    from .semi_infinite import gamma_curve, q_explicit, q_recursive, zero_scaling_report

    bits = _precision(args)
    body, rows, ok = {}, [], True
    wants_zeros = args.L is not None or not (args.check_recursion or args.scaling)
    if args.check_recursion:
        bad = [L for L in range(1, args.L_max + 1) if q_explicit(L) != q_recursive(L)]
        body["check_recursion"] = {"L_max": args.L_max, "mismatches": bad, "pass": not bad}
        ok &= not bad
    if wants_zeros:
        Ls = args.L or [5, 10, 20, 40, 80]
        body["zeros"] = {}
        for L in Ls:
            zs = [complex(z) for z in poly_roots(q_explicit(L), bits)]
            body["zeros"][str(L)] = [_cx(z) for z in zs]
            rows += [[L, z.real, z.imag] for z in zs]
        gam = gamma_curve(args.gamma_points)
        body["gamma"] = [_cx(z) for z in gam]
        rows += [["gamma", z.real, z.imag] for z in gam]
    if args.scaling:
        rep = zero_scaling_report(args.scaling, bits)
        sj = rep.to_json()
        sj["pass"] = bool(0.7 <= rep.p <= 1.3 and 0.35 <= rep.q <= 0.65)
        body["scaling"] = sj
        ok &= sj["pass"]
    columns = ["L", "re", "im"] if wants_zeros else None
    _emit(args, metadata("semi", bits), body, columns, rows)
    return EXIT_OK if ok else EXIT_FAIL


def _r0_or_default(args, J, bits):
    from .analysis import pole_method2

    if args.r0 is not None:
        return args.r0, "given"
    return pole_method2(J, precision=bits).r0, "pole_method2"


def cmd_analyze(args) -> int:
    from . import analysis as an

    bits = _precision(args)
    J, source = _series_input(args, bits)
    what = args.what
    meta = metadata(f"analyze {what}", bits, input=source)
    body, columns, rows, ok = {}, None, [], True

    if what == "pole1":
        grid = an.default_r0_grid(*args.grid) if args.grid else None
        est = an.pole_method1(J, grid, args.fit_window or (8, 14))
        body = est.to_json()
        ok = not est.low_confidence
    elif what == "pole2":
        est = an.pole_method2(J, args.r1, args.u_window, bits)
        body = est.to_json()
        ok = not est.low_confidence
    elif what == "fits":
        r0, how = _r0_or_default(args, J, bits)
        window = args.fit_window or an.fits.DEFAULT_WINDOW
        grow = an.fit_reciprocal_growth(J, window, bits)
        x = an.x_series(J, r0, precision=bits)
        cos = an.fit_cosine(x, window)
        body = {"r0": r0, "r0_source": how, "reciprocal_growth": grow.to_json(), "cosine": cos.to_json(),
                "fig1": an.coefficient_growth(J, r0)}
        u = an.reciprocal_coeffs(J, bits)
        ks = np.arange(window[0], window[1] + 1)
        gp = grow.params
        cp = cos.params
        columns = ["k", "log_u", "log_u_fit", "x", "x_fit"]
        for k in ks:
            rows.append([int(k), float(np.log(float(u[int(k)]))),
                         float(gp["A1"] * np.sqrt(k) + gp["B1"] * np.log(k) + gp["C1"]),
                         float(x[int(k)]), float(an.cosine_model(k, cp["A"], cp["B"], cp["C"], cp["D"]))])
    elif what in ("kapprox", "gammahat"):
        r0, how = _r0_or_default(args, J, bits)
        x = an.x_series(J, r0, precision=bits)
        fit = an.fit_cosine(x, args.fit_window or an.fits.DEFAULT_WINDOW)
        K = an.k_approximant(x, fit, r0, bits)
        if what == "kapprox":
            kc = K.coeffs(args.order)
            n = min(J.order, args.order)
            diff = max(abs(float(kc[k] - J[k])) for k in range(n + 1))
            body = {"r0": r0, "r0_source": how, "fit": fit.to_json(),
                    "K": [float(v) for v in kc], "J": [float(J[k]) for k in range(n + 1)],
                    "max_abs_diff": diff, "matched_through": n}
            ok = diff <= 1e-12
            if args.order > J.order:
                body["first_extra_coefficient"] = float(kc[J.order + 1])
                ok &= float(kc[J.order + 1]) < 0
            columns = ["k", "K", "J"]
            rows = [[k, float(kc[k]), float(J[k]) if k <= J.order else ""] for k in range(args.order + 1)]
        else:
            lines = an.gamma_hat_contour(K, tuple(args.region), args.grid_n)
            body = {"r0": r0, "r0_source": how, "real_crossings": an.real_crossings(K),
                    "curves": [[_cx(z) for z in line] for line in lines]}
            columns = ["curve", "re", "im"]
            rows = [[i, z.real, z.imag] for i, line in enumerate(lines) for z in line]
    elif what == "asympt":
        from .algebra.series import RationalSeries, series_exp

        checks = []
        for a in args.a:
            rep = an.asymptotic_check(a, args.k, min(bits, 128))
            rep["pass"] = bool(rep["drift"] < 0.02)
            checks.append(rep)
            ok &= rep["pass"]
        # recurrence against exp of the series a/(1-r), order 12
        oracle = []
        for a in args.a:
            rec = an.exp_singular_coeffs(Fraction(a).limit_denominator(10**6), 12, rational=True)
            ref = series_exp(RationalSeries([Fraction(0)] + [Fraction(a).limit_denominator(10**6)] * 12))
            err = max(abs(float(rec[k] - ref[k])) for k in range(13))
            oracle.append({"a": a, "max_abs_diff": err, "pass": err < 1e-25})
            ok &= err < 1e-25
        body = {"ratio_checks": checks, "oracle_order_12": oracle}
    meta["pass"] = bool(ok)
    _emit(args, meta, body, columns, rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simulate(args) -> int:
    from .simulator import SimRun, estimate_current

    g = _geometry(args)
    run = SimRun(g, args.r, args.t_max, args.seed, args.burn_in, args.batches)
    res = estimate_current(run)
    body = {"params": {"geometry": g.to_config(), "r": args.r, "t_max": args.t_max,
                       "t_burn": res.meta["t_burn"], "batches": args.batches},
            "current": res.mean, "stderr": res.stderr, "batches": res.batches,
            "crossings": res.crossings, "prng": res.meta["prng"]}
    ok = True
    if args.compare_exact:
        if g.n_states > 1000:
            raise UsageError("--compare-exact is limited to systems with at most 1000 states")
        from .exact_solver import exact_current
        from .model import build_generator

        exact = exact_current(build_generator(g), Fraction(args.r).limit_denominator(10**9))
        z = abs(res.mean - float(exact)) / res.stderr if res.stderr > 0 else math.inf
        ok = z <= 3
        body["exact"] = {"exact": format_rational(exact), "decimal": truncate_decimal(exact, 20),
                         "z": z, "pass": ok}
    _emit(args, metadata("simulate", seed=args.seed), body, ["batch", "current"],
          [[i, v] for i, v in enumerate(res.batches)])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_couple(args) -> int:
    from .simulator import CouplingViolation, coupled_run

    if args.L is None:
        raise UsageError("--L is required")
    W = args.W if args.W is not None else 4 * args.L
    finals, failures = [], []
    last = None
    for s in range(args.seed, args.seed + args.runs):
        try:
            last = coupled_run(args.L, W, args.r, args.t_max, s, args.zeta0, n_checkpoints=args.checkpoints,
                               debug=args.debug)
            finals.append([int(last.N_tau[-1]), int(last.N_eta[-1]), int(last.N_zeta[-1])])
        except CouplingViolation as exc:
            failures.append({"seed": s, "error": str(exc)})
    body = {"params": {"L": args.L, "W": W, "r": args.r, "t_max": args.t_max, "zeta0": args.zeta0,
                       "seeds": [args.seed, args.seed + args.runs - 1], "per_event_check": args.debug},
            "runs": args.runs, "violations": failures, "final_counts": finals,
            "prng": last.meta["prng"] if last is not None else None}
    rows = []
    if last is not None:
        rows = [[float(t), int(a), int(b), int(c)]
                for t, a, b, c in zip(last.times, last.N_tau, last.N_eta, last.N_zeta)]
    _emit(args, metadata("couple", seed=args.seed), body, ["t", "N_tau", "N_eta", "N_zeta"], rows)
    return EXIT_OK if not failures else EXIT_FAIL


# -- figures ----------------------------------------------------------------------

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")


def _figure(name, args, bits):
    """Returns {filename: (columns, rows)} for one figure."""
    from . import analysis as an
    from .semi_infinite import gamma_curve, q_explicit

    J = an.table_series(bits)
    if name in ("fig1", "fig2", "fig3", "fig6"):
        r0 = args.r0 if args.r0 is not None else an.pole_method2(J, precision=bits).r0
    if name == "fig1":
        cg = an.coefficient_growth(J, r0)
        return {"fig1.csv": (["k", "value"], list(zip(cg["k"], cg["coefficients"])))}
    if name == "fig2":
        u = an.reciprocal_coeffs(J, bits)
        fit = an.fit_reciprocal_growth(J, precision=bits).params
        rows = []
        for k in range(1, J.order + 1):
            lu = float(np.log(float(u[k]))) if u[k] > 0 else float("nan")
            rows.append([k, lu, float(fit["A1"] * np.sqrt(k) + fit["B1"] * np.log(k) + fit["C1"])])
        return {"fig2.csv": (["k", "value", "fit"], rows)}
    if name == "fig3":
        x = an.x_series(J, r0, precision=bits)
        p = an.fit_cosine(x).params
        rows = [[k, float(x[k]), float(an.cosine_model(k, p["A"], p["B"], p["C"], p["D"]))]
                for k in range(x.order + 1)]
        return {"fig3.csv": (["k", "value", "fit"], rows)}
    from .algebra.roots import poly_roots

    gam = [[z.real, z.imag] for z in gamma_curve(args.gamma_points)]
    if name == "fig4":
        rows = []
        for L in args.L or [5, 10, 20, 40, 80]:
            rows += [[L, *_cx(z)] for z in poly_roots(q_explicit(L), bits)]
        return {"fig4_zeros.csv": (["L", "re", "im"], rows), "fig4_gamma.csv": (["re", "im"], gam)}
    from .exact_solver import current_rational, denominator_zeros

    Ls = args.L or [1, 2, 3, 4, 5]
    if name == "fig5":
        rows = []
        for L in Ls:
            zeros, _ = denominator_zeros(current_rational(Geometry.ring(L)), bits)
            rows += [[L, *_cx(z)] for z in zeros]
        return {"fig5_zeros.csv": (["L", "re", "im"], rows)}
    # fig6: (a) semi-infinite zeros with Gamma, (b) ring zeros near the origin with the |K| = 1/4 curve
    semi = []
    for L in Ls:
        semi += [[L, *_cx(z)] for z in poly_roots(q_explicit(L), bits)]
    ring = []
    for L in Ls:
        _, near = denominator_zeros(current_rational(Geometry.ring(L)), bits)
        ring += [[L, *_cx(z)] for z in near]
    x = an.x_series(J, r0, precision=bits)
    K = an.k_approximant(x, an.fit_cosine(x), r0, bits)
    hat = [[i, *_cx(z)] for i, line in enumerate(an.gamma_hat_contour(K)) for z in line]
    return {"fig6a_zeros.csv": (["L", "re", "im"], semi), "fig6a_gamma.csv": (["re", "im"], gam),
            "fig6b_zeros.csv": (["L", "re", "im"], ring), "fig6b_gammahat.csv": (["curve", "re", "im"], hat)}


def cmd_figures(args) -> int:
    bits = _precision(args)
    names = FIGURES if "all" in args.names else args.names
    report = {}
    for name in names:
        try:
            files = _figure(name, args, bits)
        except Exception as exc:  # partial failure is reported per figure
            report[name] = {"status": "error", "error": f"{type(exc).__name__}: {exc}"}
            continue
        written = []
        for fname, (columns, rows) in files.items():
            path = os.path.join(args.out_dir, fname)
            write_text(dump_csv(metadata(f"figures {name}", bits), columns, rows), path)
            written.append(path)
        report[name] = {"status": "ok", "files": written, "rows": {f: len(r) for f, (_, r) in files.items()}}
    ok = all(v["status"] == "ok" for v in report.values())
    write_text(dump_json(metadata("figures", bits, **{"pass": ok}), {"figures": report}), args.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- golden -----------------------------------------------------------------------


def golden_compare(g: Geometry, order: int, method: str = "auto", ulps: int = 1) -> dict:
    """Compare computed coefficients with the published tables.

    Current coefficients are compared at 20 truncated digits (allowing
    ``ulps`` in the last place) for every order that is independent of the
    system size; densities at sites 1..5 must equal the printed 8-digit
    rounded values.
    """
    from .series_engine import coefficient_table
    from .tables import CURRENT_COEFFS, DENSITY_COEFFS

    if method == "auto":
        method = "modular" if g.n_states > 20000 else "exact"
    sites = list(range(1, min(5, g.L) + 1))
    table = coefficient_table(g, order, sites=sites, method=method)
    current = []
    for k in range(min(order, table.validated_order, len(CURRENT_COEFFS) - 1) + 1):
        ours = truncate_decimal(table.c[k], 20)
        current.append({"k": k, "computed": ours, "published": CURRENT_COEFFS[k],
                        "ok": decimal_matches(table.c[k], CURRENT_COEFFS[k], ulps)})
    density = []
    for i in sites:
        pub = DENSITY_COEFFS[i]
        for k in range(min(order, table.density_validated[i], len(pub) - 1) + 1):
            ours = round_decimal(table.d[i][k], 8)
            density.append({"site": i, "k": k, "computed": ours, "published": pub[k], "ok": ours == pub[k]})
    ok = all(e["ok"] for e in current + density)
    return {"geometry": g.to_config(), "order": order, "method": method, "pass": ok,
            "current": current, "density": density,
            "matched": {"current": sum(e["ok"] for e in current), "density": sum(e["ok"] for e in density)}}


def cmd_golden(args) -> int:
    g = _geometry(args)
    res = golden_compare(g, args.order, args.method, args.ulps)
    if args.format == "json":
        write_text(dump_json(metadata("golden"), res), args.out)
    else:
        lines = [f"# slowbond golden {g} order {args.order} ({res['method']})"]
        for e in res["current"]:
            mark = "ok" if e["ok"] else "DIFF"
            lines.append(f"c{e['k']:<3d} {e['computed']:>24s} {e['published']:>24s} {mark}")
        for e in res["density"]:
            mark = "ok" if e["ok"] else "DIFF"
            lines.append(f"d{e['site']},{e['k']:<2d} {e['computed']:>24s} {e['published']:>24s} {mark}")
        m = res["matched"]
        verdict = "PASS" if res["pass"] else "FAIL"
        lines.append(f"{verdict} with {m['current']} coefficients matched"
                     f" ({m['density']} density coefficients)")
        write_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK if res["pass"] else EXIT_FAIL


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default="-", help="output path (default stdout)")
    common.add_argument("--precision-bits", type=int, default=None,
                        help="working precision (default $SLOWBOND_PRECISION or 256)")

    geom = argparse.ArgumentParser(add_help=False)
    geom.add_argument("--geometry", choices=("ring", "interval"), default="ring")
    geom.add_argument("--L", type=int, default=None)
    geom.add_argument("--alpha", type=_rational, default=Fraction(1))
    geom.add_argument("--beta", type=_rational, default=Fraction(1))

    p = argparse.ArgumentParser(prog="slowbond", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("expand", parents=[common, geom], help="series coefficients of current and densities")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--method", choices=("auto", "exact", "modular"), default="auto")
    s.add_argument("--sites", type=_int_list, default=None)
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("exact", parents=[common, geom], help="exact rational current and its poles")
    s.add_argument("--window", type=_zero_window, default=("disc", 1.0))
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("semi", parents=[common], help="semi-infinite model: zeros, identities, scaling")
    s.add_argument("--L", type=_int_list, default=None)
    s.add_argument("--check-recursion", action="store_true")
    s.add_argument("--L-max", type=int, default=200)
    s.add_argument("--scaling", type=_int_list, default=None, metavar="L,L,...")
    s.add_argument("--gamma-points", type=int, default=400)
    s.set_defaults(func=cmd_semi)

    s = sub.add_parser("analyze", parents=[common], help="series analysis of the current")
    s.add_argument("what", choices=("pole1", "pole2", "fits", "kapprox", "gammahat", "asympt"))
    s.add_argument("--input", default=None, help="expand JSON output (default: the published table)")
    s.add_argument("--r0", type=float, default=None)
    s.add_argument("--r1", type=float, default=-1.5)
    s.add_argument("--window", dest="fit_window", type=_pair, default=None, metavar="LO,HI")
    s.add_argument("--u-window", type=float, default=0.25)
    s.add_argument("--grid", type=_float_list, default=None, metavar="LO,HI,STEP")
    s.add_argument("--order", type=int, default=20)
    s.add_argument("--region", type=_float_list, default=[-1.2, 0.6, -1.2, 1.2], metavar="RE0,RE1,IM0,IM1")
    s.add_argument("--grid-n", type=int, default=200)
    s.add_argument("--a", type=_float_list, default=[1.0, 2.0, 4.0])
    s.add_argument("--k", type=_int_list, default=[100_000, 200_000])
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", parents=[common, geom], help="Monte Carlo current of one system")
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--t-max", type=float, default=1e5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--burn-in", type=float, default=None)
    s.add_argument("--batches", type=int, default=20)
    s.add_argument("--compare-exact", action="store_true")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("couple", parents=[common], help="coupled three-process runs")
    s.add_argument("--L", type=int, default=None)
    s.add_argument("--W", type=int, default=None)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--t-max", type=float, default=100.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--zeta0", choices=("empty", "step", "full"), default="empty")
    s.add_argument("--checkpoints", type=int, default=50)
    s.add_argument("--debug", action="store_true", help="check the inequality after every event")
    s.set_defaults(func=cmd_couple)

    s = sub.add_parser("figures", parents=[common], help="CSV data for the figures")
    s.add_argument("names", nargs="+", choices=FIGURES + ("all",))
    s.add_argument("--out-dir", default="figures")
    s.add_argument("--L", type=_int_list, default=None)
    s.add_argument("--r0", type=float, default=None)
    s.add_argument("--gamma-points", type=int, default=400)
    s.set_defaults(func=cmd_figures)

    s = sub.add_parser("golden", parents=[geom], help="compare with the published tables")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--method", choices=("auto", "exact", "modular"), default="auto")
    s.add_argument("--ulps", type=int, default=1)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--out", default="-", help="output path (default stdout)")
    s.set_defaults(func=cmd_golden)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"slowbond {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError, AssertionError) as exc:
        print(f"slowbond {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
