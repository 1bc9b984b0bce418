"""Command-line surface: reproducible batch runs with CSV/JSON output.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 runtime guard
(step cap / budget / numeric guard tripped).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from .params import ModelParams, ParamError, params_from_eta
from .ring import SeriesRing, PointRing
from .genfun import GenFunCalc, k_infinity, BranchAmbiguity
from .ruin import (pi_value, rho, rho_oracle, prob_height_le_N)
from .oracle import (enum_excursions, enum_first_passage, symmetry_check,
                     BudgetExceeded)
from .fib import StrataTables
from .simulate import (simulate_batch, scaled_statistic, empirical_cf,
                       StepCapExceeded)
from .limits import (limit_params, phi_hat, special_phi_hat, xcal_cf,
                     invert_cf, TailNotDecayed, InversionError)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from e


def _complex(text: str) -> complex:
    try:
        return complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from e


def _out_stream(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_rows(path, header, rows, fmt):
    stream, close = _out_stream(path)
    try:
        if fmt == "json":
            payload = [dict(zip(header, row)) for row in rows]
            json.dump(payload, stream, indent=2, default=str)
            stream.write("\n")
        else:
            w = csv.writer(stream, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    finally:
        if close:
            stream.close()


def _model_from_args(args) -> ModelParams:
    if getattr(args, "eta", None) is not None:
        return params_from_eta(args.a, args.b, args.eta, args.N)
    return ModelParams(args.a, args.b, args.f, args.N)


def cmd_exact_dist(args) -> int:
    p = _model_from_args(args)
    ring = SeriesRing(max_degree=args.lmax)
    kn = GenFunCalc(p, ring).k_n() * prob_height_le_N(p)
    rows = [(i, j, i - j, k, str(c))
            for (i, j, k), c in sorted(kn.coeffs.items(),
                                       key=lambda kv: (kv[0][2], kv[0]))]
    _write_rows(args.out, ["runs", "short_runs", "long_runs", "steps", "prob"],
                rows, args.format)
    if args.verify:
        cells = enum_excursions(p, args.lmax, height_cap=p.N,
                                budget=args.budget).marginal_rvl()
        keys = set(kn.coeffs) | set(cells)
        bad = [k for k in keys
               if kn.coeffs.get(k, Fraction(0)) != cells.get(k, Fraction(0))]
        if bad:
            print(f"verify: {len(bad)} mismatched cells, e.g. {sorted(bad)[:3]}",
                  file=sys.stderr)
            return EXIT_VERIFY
        print(f"verify: all {len(keys)} cells match the enumeration exactly",
              file=sys.stderr)
    return EXIT_OK


def cmd_first_passage(args) -> int:
    p = _model_from_args(args)
    ring = SeriesRing(max_degree=args.lmax)
    g = GenFunCalc(p, ring).g(args.m, args.n)
    rows = [(i, j, i - j, k, str(c))
            for (i, j, k), c in sorted(g.coeffs.items(),
                                       key=lambda kv: (kv[0][2], kv[0]))]
    _write_rows(args.out, ["runs", "short_runs", "long_runs", "steps", "prob"],
                rows, args.format)
    if args.verify:
        g_enum, _ = enum_first_passage(args.m, args.n, p, args.lmax,
                                       budget=args.budget)
        keys = {k for k in set(g.coeffs) | set(g_enum.coeffs)
                if k[2] <= args.lmax}
        bad = [k for k in keys
               if g.coeffs.get(k, Fraction(0)) != g_enum.coeffs.get(k, Fraction(0))]
        if bad:
            print(f"verify: {len(bad)} mismatched coefficients", file=sys.stderr)
            return EXIT_VERIFY
        print("verify: closed form matches the enumeration exactly", file=sys.stderr)
    return EXIT_OK


def cmd_kn(args) -> int:
    p = _model_from_args(args)
    ring = SeriesRing(max_degree=args.lmax)
    kn = GenFunCalc(p, ring).k_n()
    rows = [(i, j, i - j, k, str(c))
            for (i, j, k), c in sorted(kn.coeffs.items(),
                                       key=lambda kv: (kv[0][2], kv[0]))]
    _write_rows(args.out, ["runs", "short_runs", "long_runs", "steps", "coeff"],
                rows, args.format)
    return EXIT_OK


def cmd_k_infinity(args) -> int:
    val = k_infinity(args.a, (args.r, args.y, args.z))
    _write_rows(args.out, ["re", "im"], [(val.real, val.imag)], args.format)
    return EXIT_OK


def cmd_simulate(args) -> int:
    p = _model_from_args(args)
    batch = simulate_batch(p, args.samples, args.seed, step_cap=args.step_cap)
    if args.out:
        rows = [(i, int(batch.M[i]), int(batch.R[i]), int(batch.V[i]),
                 int(batch.L[i]), int(batch.R_meander[i]),
                 int(batch.V_meander[i]), int(batch.L_meander[i]))
                for i in range(len(batch))]
        _write_rows(args.out, ["index", "excursions", "runs", "short_runs",
                               "steps", "meander_runs", "meander_short_runs",
                               "meander_steps"], rows, args.format)
    samples = scaled_statistic(batch, p, args.stat, zeta=args.zeta)
    cf_rows = []
    for t in args.t:
        if isinstance(samples, tuple):
            val, se = empirical_cf(samples, (t, t))
        else:
            val, se = empirical_cf(samples, t)
        cf_rows.append((t, val.real, val.imag, se))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["t", "re", "im", "stderr"])
    writer.writerows(cf_rows)
    return EXIT_OK


def cmd_density(args) -> int:
    xs = np.linspace(args.xmin, args.xmax, args.points)
    if args.cf == "sech":
        cf = lambda t: np.where(t == 0, 1.0, t / np.sinh(np.where(t == 0, 1.0, t)))
        decay = 1.0
    elif args.cf == "special":
        a = float(args.a)
        sig = math.sqrt(1 - 3 * a + 3 * a * a)
        cf = lambda t: special_phi_hat(t, a)
        decay = sig
    else:
        lp = limit_params(args.a, args.b, args.eta)
        cf = ((lambda t: phi_hat(t, lp)) if args.cf == "phi"
              else (lambda t: xcal_cf(t, lp)))
        decay = lp.kappa1 + lp.kappa2
    grid = invert_cf(cf, xs, T=args.T, dt=args.dt, decay_rate=decay)
    rows = list(zip(grid.xs.tolist(), grid.values.tolist()))
    _write_rows(args.out, ["x", "density"], rows, args.format)
    print(f"mean={grid.mean:.8f} mean_grid={grid.mean_grid:.8f} "
          f"argmax={grid.argmax:.6f}", file=sys.stderr)
    return EXIT_OK


# -- verify suites -------------------------------------------------------------------


def _suite_rho(p: ModelParams):
    checks = []
    for m in range(0, p.N + 1):
        for n in range(0, p.N + 1):
            if m == n:
                continue
            ok = rho(m, n, p) == rho_oracle(m, n, p)
            if not ok:
                checks.append({"name": f"rho({m},{n})", "passed": False,
                               "witness": str((rho(m, n, p), rho_oracle(m, n, p)))})
    checks.append({"name": "rho==oracle all pairs", "passed": not checks})
    return checks


def _suite_identities(p: ModelParams):
    ring = SeriesRing(max_degree=10)
    tab = StrataTables(p, ring)
    a, b, f, N = p.a, p.b, p.f, p.N
    r, z = ring.r, ring.z
    x_a, _ = tab.homog_coeffs(a)
    x_b, _ = tab.homog_coeffs(b)
    x_ab, _ = tab.mixed_coeffs(a, b)
    checks = []

    def add(name, ok, witness=""):
        checks.append({"name": name, "passed": bool(ok),
                       **({"witness": witness} if not ok else {})})

    sym = all(tab.wbar(m, n) == tab.wbar(n - 1, m - 1)
              for m in range(1, N) for n in range(m + 1, N + 1))
    add("wbar symmetry", sym)
    homog = all(
        tab.wstar(n, a) * tab.wstar(n, a) - tab.wstar(n + 1, a) * tab.wstar(n - 1, a)
        == a * a * (1 - a) ** 2 * r * r * z**4 * x_a ** (n - 2)
        for n in range(2, 7))
    add("homogeneous interlacing", homog)
    br = all(
        tab.bracket_w(f - ell, f + j)
        == a * a * r * r * z**4 * (1 - a) * (1 - b) * x_a ** (ell - 2) * x_ab * x_b ** (j - 1)
        for ell in range(2, f + 1) for j in range(1, N - f))
    add("bracket crossing case", br)
    lam = all(
        GenFunCalc(p, ring).lambda_factor(m, n)
        == GenFunCalc(p, ring).lambda_factor_def(m, n)
        for m in range(0, min(3, N - 2)) for n in range(m + 2, min(m + 5, N) + 1))
    add("lambda ratio == definition", lam)
    one = PointRing(Fraction(1), Fraction(1), Fraction(1))
    t1 = StrataTables(p, one)
    evals = all(
        t1.wbar(f - ell, f + j) == a**ell * b ** (j - 1) * pi_value(f - ell, f + j, p)
        for ell in range(1, f + 1) for j in range(1, N - f + 1))
    add("evaluation at 1 closed forms", evals)
    return checks


def _suite_symmetry(a, nmax):
    ok, fails = symmetry_check(a, nmax)
    return [{"name": f"runs symmetry a={a} n<={nmax}", "passed": ok,
             **({"witness": str(fails[:3])} if fails else {})}]


def _suite_oracle(p: ModelParams, lmax):
    ring = SeriesRing(max_degree=lmax)
    kn = GenFunCalc(p, ring).k_n() * prob_height_le_N(p)
    cells = enum_excursions(p, lmax, height_cap=p.N).marginal_rvl()
    keys = set(kn.coeffs) | set(cells)
    bad = [k for k in keys
           if kn.coeffs.get(k, Fraction(0)) != cells.get(k, Fraction(0))]
    return [{"name": f"K_N vs enumeration (L<={lmax})", "passed": not bad,
             **({"witness": str(sorted(bad)[:3])} if bad else {})}]


def _suite_limits(a):
    a = float(a)
    sig = math.sqrt(1 - 3 * a + 3 * a * a)
    xs = np.linspace(-12, 8, 2001)
    grid = invert_cf(lambda t: special_phi_hat(t, a), xs, decay_rate=sig)
    checks = [
        {"name": "density mean (cf derivative)",
         "passed": abs(grid.mean - (-(1 - 2 * a) ** 2)) < 1e-5,
         "witness": f"{grid.mean:.8f}"},
        {"name": "grid mean agrees",
         "passed": abs(grid.mean - grid.mean_grid) < 1e-5,
         "witness": f"{grid.mean_grid:.8f}"},
    ]
    if abs(a - 0.25) < 1e-12:
        checks.append({"name": "argmax matches reference",
                       "passed": abs(grid.argmax - (-0.131619)) < 1e-3,
                       "witness": f"{grid.argmax:.6f}"})
    return checks


def cmd_verify(args) -> int:
    if args.suite == "rho":
        checks = _suite_rho(_model_from_args(args))
    elif args.suite == "identities":
        checks = _suite_identities(_model_from_args(args))
    elif args.suite == "symmetry":
        checks = _suite_symmetry(args.a, args.nmax)
    elif args.suite == "oracle":
        checks = _suite_oracle(_model_from_args(args), args.lmax)
    else:
        checks = _suite_limits(args.a)
    passed = all(c["passed"] for c in checks)
    report = {"suite": args.suite, "passed": passed, "checks": checks}
    stream, close = _out_stream(args.out)
    json.dump(report, stream, indent=2)
    stream.write("\n")
    if close:
        stream.close()
    return EXIT_OK if passed else EXIT_VERIFY


def _add_model_args(sp, need_f=True):
    sp.add_argument("--a", type=_rational, required=True,
                    help="persistence below f, as a rational like 1/3")
    sp.add_argument("--b", type=_rational, required=True,
                    help="persistence at or above f")
    if need_f:
        sp.add_argument("--f", type=int, help="stratum boundary level")
        sp.add_argument("--eta", type=float,
                        help="alternative to --f: boundary at round(eta*N)")
    sp.add_argument("--N", type=int, required=True, help="absorbing level")


def _add_out_args(sp):
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ruin",
        description="Exact and simulated run/step statistics of the "
                    "two-strata persistent ruin walk")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("exact-dist",
                        help="exact excursion joint distribution from K_N")
    _add_model_args(sp)
    sp.add_argument("--lmax", type=int, default=16)
    sp.add_argument("--verify", action="store_true",
                    help="cross-check every cell against path enumeration")
    sp.add_argument("--budget", type=int, default=10**8)
    _add_out_args(sp)
    sp.set_defaults(func=cmd_exact_dist)

    sp = sub.add_parser("first-passage",
                        help="first-passage generating function coefficients")
    _add_model_args(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lmax", type=int, default=16)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--budget", type=int, default=10**8)
    _add_out_args(sp)
    sp.set_defaults(func=cmd_first_passage)

    sp = sub.add_parser("kn", help="series coefficients of K_N")
    _add_model_args(sp)
    sp.add_argument("--lmax", type=int, default=16)
    _add_out_args(sp)
    sp.set_defaults(func=cmd_kn)

    sp = sub.add_parser("k-infinity",
                        help="evaluate the barrier-free excursion gf")
    sp.add_argument("--a", type=_rational, required=True)
    sp.add_argument("--r", type=_complex, required=True)
    sp.add_argument("--y", type=_complex, required=True)
    sp.add_argument("--z", type=_complex, required=True)
    _add_out_args(sp)
    sp.set_defaults(func=cmd_k_infinity)

    sp = sub.add_parser("simulate", help="Monte Carlo trajectories and cf table")
    _add_model_args(sp)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--stat", choices=["X", "Xcal", "Y1Y2", "Xzeta", "Z1Z2"],
                    default="X")
    sp.add_argument("--zeta", type=float, default=None)
    sp.add_argument("--t", type=lambda s: [float(x) for x in s.split(",")],
                    default=[1.0], help="comma-separated cf evaluation points")
    sp.add_argument("--step-cap", type=int, default=10**9)
    _add_out_args(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("density", help="invert a limit-law cf to a density CSV")
    sp.add_argument("--cf", choices=["phi", "xcal", "special", "sech"],
                    default="special")
    sp.add_argument("--a", type=_rational, default=Fraction(1, 4))
    sp.add_argument("--b", type=_rational, default=None)
    sp.add_argument("--eta", type=float, default=None)
    sp.add_argument("--xmin", type=float, default=-12.0)
    sp.add_argument("--xmax", type=float, default=8.0)
    sp.add_argument("--points", type=int, default=2001)
    sp.add_argument("--T", type=float, default=None)
    sp.add_argument("--dt", type=float, default=1e-3)
    _add_out_args(sp)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("verify", help="run an exactness suite, JSON report")
    sp.add_argument("--suite", required=True,
                    choices=["identities", "symmetry", "rho", "oracle", "limits"])
    sp.add_argument("--a", type=_rational, default=Fraction(1, 3))
    sp.add_argument("--b", type=_rational, default=Fraction(3, 5))
    sp.add_argument("--f", type=int, default=3)
    sp.add_argument("--eta", type=float, default=None)
    sp.add_argument("--N", type=int, default=7)
    sp.add_argument("--nmax", type=int, default=5)
    sp.add_argument("--lmax", type=int, default=12)
    _add_out_args(sp)
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    # RUIN_THREADS caps worker parallelism; computation is vectorized
    # single-process, so it only pins the BLAS/numpy thread pools.
    threads = os.environ.get("RUIN_THREADS")
    if threads:
        os.environ.setdefault("OMP_NUM_THREADS", threads)
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ParamError, ValueError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (StepCapExceeded, BudgetExceeded, TailNotDecayed, InversionError,
            BranchAmbiguity) as e:
        print(f"runtime guard: {e}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
