"""Command-line front end.

Subcommands: analyze, zalcman, fibers, criteria, phi-check, catalog,
grid.  Reports are JSON on stdout; CSV grids go to --out.  Exit status:
0 success (warnings allowed), 2 argument errors, 3 DSL parse errors,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog as catalog_mod
from . import criteria, metrics, normality, zalcman
from .errors import DomainError, ExprSyntaxError, NumericalError
from .gridsearch import polar_angles, polar_radii
from .harmonic import HarmonicMap, load_map
from .reporting import (VERSION, jsonable, parse_complex_list, render_report)

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_PARSE = 3
EXIT_NUMERIC = 4


def _add_map_flags(p):
    p.add_argument("--h", dest="h_expr", metavar="EXPR",
                   help="holomorphic part as DSL text")
    p.add_argument("--g", dest="g_expr", metavar="EXPR",
                   help="anti-holomorphic part (conjugated); default 0")
    p.add_argument("--map", dest="map_path", metavar="PATH",
                   help="JSON map file {h, g, label}")


def _load_map(args) -> HarmonicMap:
    if args.map_path:
        if args.h_expr or args.g_expr:
            raise ValueError("give either --map or --h/--g, not both")
        return load_map(args.map_path)
    if not args.h_expr:
        raise ValueError("a map is required: --h EXPR [--g EXPR] or --map PATH")
    return HarmonicMap.from_text(args.h_expr, args.g_expr,
                                 label=args.h_expr)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="harmap",
        description="Numerical toolkit for planar harmonic mappings "
                    "f = h + conj(g) on the unit disk")
    ap.add_argument("--version", action="version", version=VERSION)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("analyze", help="boundary sup estimates and trend verdicts")
    _add_map_flags(p)
    p.add_argument("--phi", metavar="SPEC", help="pow:<s> or table:<path>")
    p.add_argument("--k", type=int, default=None,
                   help="extended-derivative order for the phi run")
    p.add_argument("--rmax", type=float, default=0.99)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--refine", type=int, default=3)
    p.add_argument("--lipschitz", type=int, default=0, metavar="N",
                   help="also estimate the Lipschitz quotient from N pairs")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("zalcman", help="extract a rescaling sequence")
    _add_map_flags(p)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--steps", type=int, default=5)

    p = sub.add_parser("fibers", help="solve f(z) = a for given targets")
    _add_map_flags(p)
    p.add_argument("--targets", required=True, metavar="a1,a2,...",
                   help="complex literals in re+imi form")
    p.add_argument("--rmax", type=float, default=0.9)
    p.add_argument("--grid", type=int, default=24,
                   help="Newton seed grid resolution")

    p = sub.add_parser("criteria", help="fiber-based hypothesis checkers")
    _add_map_flags(p)
    p.add_argument("--theorem", choices=("1.2", "1.3", "1.5", "1.6"))
    p.add_argument("--cross", action="store_true",
                   help="run the full-catalog cross-check harness")
    p.add_argument("--request", metavar="PATH",
                   help="JSON criterion request record")
    p.add_argument("--phi", metavar="SPEC", default="pow:2")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--E", metavar="a1,...", help="target set")
    p.add_argument("--P", metavar="c0,c1,...",
                   help="polynomial coefficients, constant term first")
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--rmax", type=float, default=0.9)
    p.add_argument("--grid", type=int, default=24)

    p = sub.add_parser("phi-check", help="validate a weight function")
    p.add_argument("--phi", required=True, metavar="SPEC")

    p = sub.add_parser("catalog", help="list or export the builtin maps")
    p.add_argument("--out", metavar="PATH",
                   help="write map records + label sidecars as JSON")

    p = sub.add_parser("grid", help="CSV heatmap of a functional on a polar grid")
    _add_map_flags(p)
    p.add_argument("--functional", choices=("normality", "phi", "esd"),
                   default="normality")
    p.add_argument("--phi", metavar="SPEC")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--rmax", type=float, default=0.99)
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--out", required=True, metavar="PATH")
    return ap


# -- result converters -------------------------------------------------------


def _sup_estimate_dict(est):
    return {
        "value": est.value,
        "argmax": est.argmax,
        "r_max": est.r_max,
        "grid_resolution": est.grid_resolution,
        "refined": est.refined,
        "verdict": est.verdict,
        "slope": est.slope,
        "skips": est.skips,
        "trend": [{"r": r, "circle_max": v} for r, v in est.trend],
    }


def _step_dict(step):
    return {
        "n": step.n,
        "z_star": step.z_star,
        "r_n": step.r_n,
        "t_n": step.t_n,
        "z_n": step.z_n,
        "rho_n": step.rho_n,
        "rho_over_gap": step.rho_over_gap,
        "sd_at_zero": step.sd_at_zero,
        "ceiling": step.bound,
        "compact_max_sd": step.compact_max_sd,
        "skips": step.skips,
        "unreliable": step.unreliable,
        "epsilon": step.epsilon,
        "zp2_value": step.zp2_value,
    }


def _fiber_dict(fiber):
    return {
        "target": fiber.target,
        "roots": list(fiber.roots),
        "residuals": list(fiber.residuals),
        "region_r_max": fiber.region_r_max,
    }


def _criterion_dict(rep):
    out = {
        "theorem": rep.theorem_id,
        "E": list(rep.E),
        "k": rep.k,
        "sup_over_fibers": rep.sup_over_fibers,
        "auxiliary_sups": dict(rep.auxiliary_sups),
        "hypothesis_met": rep.hypothesis_met,
        "prediction": rep.prediction,
        "vacuous": rep.vacuous,
        "trend": [{"r": r, "sup": v} for r, v in rep.trend],
        "trend_verdict": rep.trend_verdict,
        "notes": list(rep.notes),
        "warnings": list(rep.warnings),
    }
    if rep.sense_preserving is not None:
        out["sense_preserving"] = {
            "ok": rep.sense_preserving.ok,
            "witness": rep.sense_preserving.witness,
            "samples_checked": rep.sense_preserving.samples_checked,
        }
    return out


# -- subcommand runners ------------------------------------------------------


def _run_analyze(args, warnings):
    f = _load_map(args)
    inputs = {"h": f.h.source(), "g": f.g.source(), "label": f.label,
              "r_max": args.rmax, "grid": args.grid, "refine": args.refine,
              "phi": args.phi, "k": args.k, "seed": args.seed}
    results = {"normality": _sup_estimate_dict(
        normality.estimate_sup_normality(f, args.rmax, args.grid, args.refine))}
    if args.phi:
        phi = normality.parse_phi(args.phi)
        results["phi"] = _sup_estimate_dict(normality.estimate_sup_phi(
            f, phi, args.rmax, args.grid, args.refine, k=args.k))
    if args.lipschitz > 0:
        est = metrics.lipschitz_quotient_estimate(
            f, args.lipschitz, args.rmax, args.seed)
        results["lipschitz"] = {
            "value": est.value, "pair": list(est.pair),
            "n_pairs": est.n_pairs, "n_used": est.n_used,
            "n_skipped": est.n_skipped, "n_rejected": est.n_rejected,
            "sigma_convention": est.sigma_convention,
        }
    return inputs, results


def _run_zalcman(args, warnings):
    f = _load_map(args)
    inputs = {"h": f.h.source(), "g": f.g.source(), "label": f.label,
              "alpha": args.alpha, "steps": args.steps}
    seq = zalcman.extract_sequence(f, args.alpha, args.steps)
    if seq.failures:
        for z_star, status in seq.failures:
            warnings.append(f"probe {z_star} unusable: {status}")
    if len(seq.steps) < args.steps:
        warnings.append(f"only {len(seq.steps)} of {args.steps} steps usable")
    results = {
        "alpha": seq.alpha,
        "converged": seq.converged_flag,
        "steps": [_step_dict(s) for s in seq.steps],
    }
    return inputs, results


def _run_fibers(args, warnings):
    f = _load_map(args)
    targets = parse_complex_list(args.targets)
    if not targets:
        raise ValueError("--targets must list at least one value")
    inputs = {"h": f.h.source(), "g": f.g.source(), "label": f.label,
              "targets": targets, "r_max": args.rmax, "seed_grid": args.grid}
    fibers = [criteria.solve_fiber(f, a, args.rmax, args.grid) for a in targets]
    for fb in fibers:
        if not fb.roots:
            warnings.append(f"fiber of {fb.target} empty within |z| <= {args.rmax}")
    return inputs, {"fibers": [_fiber_dict(fb) for fb in fibers]}


def _run_criteria(args, warnings):
    if args.cross:
        phi = normality.parse_phi(args.phi)
        report = criteria.cross_check(catalog_mod.catalog_maps(), phi,
                                      (1, 2, 3), args.rmax,
                                      epsilon=args.epsilon,
                                      seed_grid=args.grid)
        inputs = {"phi": args.phi, "r_max": args.rmax,
                  "k_list": [1, 2, 3], "epsilon": args.epsilon}
        warnings.extend(report.warnings)
        rows = [{
            "map": row.map_label, "checker": row.checker,
            "hypothesis_met": row.hypothesis_met,
            "prediction": row.prediction,
            "direct_verdict": row.direct_verdict,
            "red": row.red, "vacuous": row.vacuous,
        } for row in report.rows]
        return inputs, {"rows": rows, "n_red": report.n_red}

    request = {}
    if args.request:
        with open(args.request, "r", encoding="utf-8") as fh:
            request = json.load(fh)
    theorem = request.get("theorem", args.theorem)
    if not theorem:
        raise ValueError("--theorem, --cross, or --request is required")
    f = _load_map(args)
    phi_spec = request.get("phi", args.phi)
    phi = normality.parse_phi(phi_spec)
    k = int(request.get("k", args.k))
    r_max = float(request.get("r_max", args.rmax))
    seed_grid = int(request.get("grid", args.grid))
    e_raw = request.get("E")
    if e_raw is not None:
        E = [complex(re, im) for re, im in e_raw]
    elif args.E:
        E = parse_complex_list(args.E)
    else:
        E = None

    inputs = {"h": f.h.source(), "g": f.g.source(), "label": f.label,
              "theorem": theorem, "phi": phi_spec, "k": k,
              "r_max": r_max, "grid": seed_grid}
    if theorem == "1.2":
        rep = criteria.check_min_spherical(f, args.epsilon, r_max)
        inputs["epsilon"] = args.epsilon
    elif theorem == "1.3":
        coeffs = ([float(c) for c in args.P.split(",")]
                  if args.P else request.get("P", [0.0, 1.0]))
        P = criteria.NonNegPolynomial(tuple(coeffs))
        if E is None:
            E = criteria.default_targets(5)
        rep = criteria.check_lappan_poly(f, P, E, phi, r_max, seed_grid)
        inputs["P"] = list(P.coefficients)
    elif theorem == "1.5":
        if E is None:
            E = criteria.default_targets(k + 4)
        rep = criteria.check_thm_y(f, k, E, phi, r_max, seed_grid)
    else:
        if E is None:
            E = criteria.default_targets(k // 2 + 4)
        rep = criteria.check_thm_ya(f, k, E, phi, r_max, seed_grid)
    warnings.extend(rep.warnings)
    return inputs, _criterion_dict(rep)


def _run_phi_check(args, warnings):
    phi = normality.parse_phi(args.phi)
    validation = normality.validate_phi(phi)
    warnings.extend(validation.notes)
    results = {
        "phi": phi.spec,
        "growth_ok": validation.growth_ok,
        "compact_ok": validation.compact_ok,
        "convexity_ok": validation.convexity_ok,
        "all_ok": validation.all_ok,
        "growth_values": validation.growth_values,
        "compact_devs": [{"a": a, "max_dev": d} for a, d in validation.compact_devs],
    }
    return {"phi": args.phi}, results


def _run_catalog(args, warnings):
    records = catalog_mod.export_records()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(jsonable(records), fh, indent=2)
            fh.write("\n")
    results = {"entries": [{"label": r["label"], "labels": r["labels"]}
                           for r in records]}
    if args.out:
        results["written"] = args.out
    return {"out": args.out}, results


def _run_grid(args, warnings):
    f = _load_map(args)
    phi = normality.parse_phi(args.phi) if args.phi else None
    if args.functional in ("phi", "esd") and phi is None:
        raise ValueError(f"--functional {args.functional} requires --phi")

    radii = polar_radii(args.rmax, args.grid)
    angles = polar_angles(args.grid)
    zs = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    if args.functional == "normality":
        values = normality.normality_functional_many(f, zs)
        name = "normality"
    elif args.functional == "phi":
        values = normality.phi_normality_functional_many(f, phi, zs)
        name = f"phi[{phi.spec}]"
    else:
        values = normality.phi_normality_functional_many(f, phi, zs, k=args.k)
        name = f"esd[k={args.k},{phi.spec}]"

    lines = [f"# harmap grid functional={name} h={f.h.source()} "
             f"g={f.g.source()} rmax={args.rmax!r} grid={args.grid}",
             "r,theta,z_re,z_im,value"]
    idx = 0
    for r in radii:
        for theta in angles:
            z = zs[idx]
            lines.append(f"{float(r)!r},{float(theta)!r},{float(z.real)!r},"
                         f"{float(z.imag)!r},{float(values[idx])!r}")
            idx += 1
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    results = {"written": args.out, "functional": name,
               "rows": int(len(radii) * len(angles)),
               "radii": len(radii), "angles": len(angles)}
    inputs = {"h": f.h.source(), "g": f.g.source(), "r_max": args.rmax,
              "grid": args.grid, "functional": args.functional}
    return inputs, results


_RUNNERS = {
    "analyze": _run_analyze,
    "zalcman": _run_zalcman,
    "fibers": _run_fibers,
    "criteria": _run_criteria,
    "phi-check": _run_phi_check,
    "catalog": _run_catalog,
    "grid": _run_grid,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    warnings: list = []
    try:
        inputs, results = _RUNNERS[args.subcommand](args, warnings)
    except ExprSyntaxError as exc:
        print(f"harmap: expression error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, DomainError, KeyError, OSError) as exc:
        print(f"harmap: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except NumericalError as exc:
        print(f"harmap: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(render_report(args.subcommand, inputs, results, warnings))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
