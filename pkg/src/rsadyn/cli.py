"""Command-line front end.

One subcommand per verifiable claim cluster: `salem` (polynomial
construction and certification), `verify` (orbit identities, landing
criterion, fiber orbit pattern, push-forward characteristic polynomial,
multiplier suite), `linearize` (return maps, conjugacy solve, residuals,
Birkhoff curve), `raster` (recurrence rasters to PGM/CSV), `bench` (kernel
backend comparison).

Contract: a single JSON report on stdout, diagnostics on stderr. Exit
codes: 0 success, 2 argument validation, 3 not-Salem, 4 verification
failure, 5 linearization obstruction, 6 I/O failure.
"""

import argparse
import json
import sys

from mpmath import mp, mpf, workprec

from . import blowup, family, picard, probes, salem, series
from .errors import NotSalemError, RsadynError, ValidationError
from .numeric import float_log2

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_NOT_SALEM = 3
EXIT_VERIFY = 4
EXIT_OBSTRUCTION = 5
EXIT_IO = 6


def _diag(msg):
    print(msg, file=sys.stderr)


def _emit(report):
    json.dump(report, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def _add_family_flags(p):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--root-index", type=int, default=0)
    p.add_argument("--sqrt-branch", type=int, default=1, choices=(1, -1))
    p.add_argument("--precision", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    ap = argparse.ArgumentParser(prog="rsadyn")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("salem", help="construct and certify the family "
                                     "polynomial")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--precision", type=int, default=256)

    p = sub.add_parser("verify", help="run the verification suite for one "
                                      "family member")
    _add_family_flags(p)
    p.add_argument("--perturb", type=float, default=0.0,
                   help="relative perturbation of delta for the landing "
                        "sharpness check")

    p = sub.add_parser("linearize", help="return maps and conjugacy solve")
    _add_family_flags(p)
    p.add_argument("--degree", type=int, default=12)
    p.add_argument("--demo-resonant", action="store_true",
                   help="run the synthetic obstruction fixture instead")
    p.add_argument("--mismatch-c", type=float, default=0.0,
                   help="relative scaling of c: a nonzero value leaves the "
                        "parameter locus and must produce an obstruction")

    p = sub.add_parser("raster", help="recurrence raster to PGM/CSV")
    _add_family_flags(p)
    p.add_argument("--chart", default="line", choices=("line", "affine"))
    p.add_argument("--window", default="0.2,1.3,0.0,0.05",
                   help="x0,x1,y0,y1 in chart coordinates")
    p.add_argument("--res", default="128x128", help="WxH")
    p.add_argument("--budget", type=int, default=0,
                   help="iteration budget; 0 = first candidate >= 10^4")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--out", required=True, help="output PGM path")
    p.add_argument("--csv", default=None, help="optional CSV path")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--basepoint", default=None,
                   help="re1,im1,re2,im2 base point for the affine chart")

    sub.add_parser("bench", help="compare the numba and numpy kernels")
    return ap


def cmd_salem(args):
    # n = 3, m = 1 is constructible but fails certification (exit 3);
    # n < 3 is outside the family entirely (exit 2)
    if args.n < 3 or args.m < 1:
        _diag("invalid: need n >= 3 and m >= 1")
        return EXIT_ARGS
    poly = salem.salem_polynomial(args.n, args.m)
    try:
        cert = salem.salem_certificate(poly, args.precision)
    except NotSalemError as exc:
        _emit({"n": args.n, "m": args.m, "coefficients": poly.to_json(),
               "salem": False, "reason": exc.reason})
        return EXIT_NOT_SALEM
    with workprec(args.precision):
        ent = picard.entropy(args.n, args.m, args.precision)
        report = {
            "n": args.n, "m": args.m,
            "coefficients": poly.to_json(),
            "salem": True,
            "certificate": cert.to_json(),
            "entropy": mp.nstr(ent, 40),
        }
    _emit(report)
    return EXIT_OK


def cmd_verify(args):
    params = family.build_params(args.n, args.m, args.j, args.root_index,
                                 args.sqrt_branch, args.precision)
    checks = {}

    with workprec(args.precision):
        idents = family.orbit_identities(params)
        checks["orbit_identities"] = {
            "max_residual": mp.nstr(idents["max_residual"], 8),
            "pass": idents["max_residual"] < mpf(10) ** -30,
        }

        delta_probe = params.delta * (1 + mpf(args.perturb)) \
            if args.perturb else params.delta
        landing = blowup.landing_condition(args.n, args.m, delta_probe,
                                           args.precision)
        checks["landing"] = {
            "residual": mp.nstr(landing, 8),
            "log2_residual": float_log2(landing),
            "pass": landing < mpf(10) ** -30,
        }

        try:
            orbit_report = blowup.fiber_orbit_check(params, seed=args.seed)
            checks["fiber_orbit"] = {"pass": True,
                                     "chain_landing_residual": mp.nstr(
                                         orbit_report["chain_landing_residual"], 8)}
        except RsadynError as exc:
            checks["fiber_orbit"] = {"pass": False, "error": str(exc)}

        chi = salem.salem_polynomial(args.n, args.m)
        char = picard.charpoly(picard.t_action_matrix(args.n, args.m))
        checks["charpoly_equal"] = (char == chi)

        fps = family.fixed_points(params)
        mult_entries = []
        mult_ok = True
        for fp in fps:
            md = family.multipliers_at_fixed(params, fp)
            prod_res = abs(md.lambda1 * md.lambda2 - params.delta)
            ok = prod_res < mpf(10) ** -25 \
                and md.jacobian_residual < mpf(10) ** -25
            mult_ok = mult_ok and ok
            mult_entries.append({
                "product_residual": mp.nstr(prod_res, 8),
                "jacobian_residual": mp.nstr(md.jacobian_residual, 8),
                "unit_modulus": md.unit_modulus,
                "rank2_criterion": md.rank2_criterion,
                "pass": ok,
            })
        checks["multipliers"] = {"fixed_points": mult_entries,
                                 "pass": mult_ok}

        all_ok = (checks["orbit_identities"]["pass"]
                  and checks["landing"]["pass"]
                  and checks["fiber_orbit"]["pass"]
                  and checks["charpoly_equal"]
                  and mult_ok)
    report = {"params": params.to_json(), "checks": checks, "pass": all_ok}
    _emit(report)
    if not all_ok:
        for name in ("orbit_identities", "landing", "fiber_orbit",
                     "charpoly_equal", "multipliers"):
            entry = checks[name]
            bad = (entry is False) or (isinstance(entry, dict)
                                       and not entry.get("pass", True))
            if bad:
                _diag("verification failed at check: %s" % name)
                break
        return EXIT_VERIFY
    return EXIT_OK


def cmd_linearize(args):
    bits = args.precision
    if args.demo_resonant:
        # synthetic resonant map (lam x + x^2 y, y/lam) with the (1,1)
        # relation: the (2,1) coefficient sits on the resonant line with
        # nonvanishing forcing, so no formal conjugacy exists
        params = family.build_params(args.n, args.m, args.j, args.root_index,
                                     args.sqrt_branch, bits)
        with workprec(bits):
            lam = params.lam
            d = args.degree
            h1 = series.BivariateSeries(d, {(1, 0): lam, (2, 1): 1})
            h2 = series.BivariateSeries(d, {(0, 1): 1 / lam})
            result = series.linearize_diagonal(
                (h1, h2), lam, 1 / lam, d, rc=series.ResonanceClass(1, 1),
                precision_bits=bits)
        _emit({"demo_resonant": True,
               "linearization": result.to_json(bits)})
        return EXIT_OBSTRUCTION if result.obstruction else EXIT_OK

    params = family.build_params(args.n, args.m, args.j, args.root_index,
                                 args.sqrt_branch, bits)
    if args.mismatch_c:
        params = family.with_mismatched_c(params, 1 + args.mismatch_c)
    d = args.degree
    with workprec(bits):
        h_corner, corner_rep = series.corner_return_map(
            params, d, strict_linear=not args.mismatch_c)
        rc = corner_rep["resonance"]
        eta1, eta2 = corner_rep["eta"]
        corner_lin = series.linearize_diagonal(
            h_corner, eta1, eta2, d, rc=rc, precision_bits=bits)
        corner_entry = {
            "linear_residual": mp.nstr(corner_rep["linear_residual"], 8),
            "max_resonant_coefficient":
                mp.nstr(corner_rep["max_resonant_coefficient"], 8),
            "linearization": corner_lin.to_json(bits),
        }
        if not corner_lin.obstruction:
            res = series.verify_conjugacy(h_corner, corner_lin.phi, eta1,
                                          eta2, d, precision_bits=bits)
            corner_entry["conjugacy_residual"] = mp.nstr(res, 8)

        report = {"params": params.to_json(), "degree": d,
                  "corner": corner_entry}

        if not args.mismatch_c:
            w0 = _line_basepoint(params)
            h_line, line_rep = series.infinity_return_map(params, w0, d)
            line_lin = series.linearize_diagonal(
                h_line, params.lam, 1, d, rc=None, precision_bits=bits)
            line_entry = {
                "basepoint": mp.nstr(w0, 12),
                "multiplier_residual":
                    mp.nstr(line_rep["multiplier_residual"], 8),
                "linearization": line_lin.to_json(bits),
            }
            if not line_lin.obstruction:
                res = series.verify_conjugacy(h_line, line_lin.phi,
                                              params.lam, 1, d,
                                              precision_bits=bits)
                line_entry["conjugacy_residual"] = mp.nstr(res, 8)
            report["line_point"] = line_entry

            fps = family.fixed_points(params)
            md = family.multipliers_at_fixed(params, fps[0])
            if md.rank2_criterion and md.unit_modulus:
                birk = probes.birkhoff_linearize(params, fps[0],
                                                 seed=args.seed)
                report["birkhoff"] = {
                    "n_values": birk["n_values"],
                    "residuals": birk["residuals"],
                    "dropped_samples": birk["dropped_samples"],
                }
            else:
                report["birkhoff"] = {"skipped":
                                      "fixed point is not rank-2/unit-modulus"}

    _emit(report)
    if corner_lin.obstruction:
        _diag("linearization obstruction at %r" %
              (corner_lin.obstruction[1],))
        return EXIT_OBSTRUCTION
    return EXIT_OK


def _line_basepoint(params):
    """A deterministic base point on the invariant line away from the
    blown-up points."""
    with workprec(params.precision_bits):
        for cand in (mpf("0.37") + mpf("0.11") * 1j,
                     mpf("0.53") - mpf("0.21") * 1j,
                     mpf("1.23") + mpf("0.31") * 1j):
            good = abs(cand) > mpf("0.1")
            w = cand
            for _ in range(params.n):
                if min(abs(w - ws) for ws in params.orbit) < mpf("0.05") \
                        or abs(w) < mpf("0.05"):
                    good = False
                    break
                w = params.c - params.delta / w
            if good:
                return cand
    raise ValidationError("no clean base point found on the invariant line")


def cmd_raster(args):
    params = family.build_params(args.n, args.m, args.j, args.root_index,
                                 args.sqrt_branch, args.precision)
    try:
        x0, x1, y0, y1 = (float(v) for v in args.window.split(","))
        w, h = (int(v) for v in args.res.lower().split("x"))
    except ValueError:
        _diag("invalid --window or --res")
        return EXIT_ARGS
    basepoint = None
    if args.basepoint:
        try:
            re1, im1, re2, im2 = (float(v) for v in args.basepoint.split(","))
            basepoint = (complex(re1, im1), complex(re2, im2))
        except ValueError:
            _diag("invalid --basepoint")
            return EXIT_ARGS
    budget = args.budget if args.budget > 0 else None
    grid = probes.siegel_raster(params, args.chart, (x0, x1, y0, y1), (w, h),
                                budget=budget, eps=args.eps,
                                threads=args.threads, basepoint=basepoint)
    try:
        grid.write_pgm(args.out)
        if args.csv:
            grid.write_csv(args.csv)
    except OSError as exc:
        _diag("cannot write output: %s" % exc)
        return EXIT_IO
    counts = grid.counts()
    _emit({
        "chart": grid.chart, "window": list(grid.window),
        "resolution": list(grid.resolution), "budget": grid.budget,
        "eps": grid.eps, "candidates": list(grid.candidates),
        "counts": counts, "out": args.out, "csv": args.csv,
        "threads": args.threads,
    })
    return EXIT_OK


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "salem":
            return cmd_salem(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "linearize":
            return cmd_linearize(args)
        if args.command == "raster":
            return cmd_raster(args)
        if args.command == "bench":
            from . import bench
            return bench.main()
    except NotSalemError as exc:
        _diag("not a Salem polynomial: %s" % exc.reason)
        _emit({"salem": False, "reason": exc.reason})
        return EXIT_NOT_SALEM
    except ValidationError as exc:
        _diag("invalid arguments: %s" % exc)
        return EXIT_ARGS
    except OSError as exc:
        _diag("i/o failure: %s" % exc)
        return EXIT_IO
    except RsadynError as exc:
        _diag("verification failure: %s" % exc)
        return EXIT_VERIFY
    return EXIT_ARGS


if __name__ == "__main__":
    raise SystemExit(main())
