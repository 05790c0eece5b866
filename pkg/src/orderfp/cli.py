"""Command-line front end: modulus profiles, cone diagnostics, mapping checks,
orbit generation, center solving, and the verification suites."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from orderfp.asymcenter import make_problem, solve_asym_center, verify_center_is_fixed
from orderfp.harness import SUITES, load_config, run_suites, summary_table
from orderfp.iterate import (
    IterationConfig,
    mann_orbit,
    picard_orbit,
    read_orbit_points,
    write_orbit_csv,
)
from orderfp.mapping import (
    SamplerConfig,
    classify_hilbert_classes,
    is_alpha_nonexpansive,
    is_monotone,
    is_monotone_nonexpansive,
    load_mapping,
)
from orderfp.order import (
    ConeSpec,
    UnsupportedConeOperation,
    inf_pair,
    is_norm_monotonic,
    leq,
    normality_constant_estimate,
    sample_cone_point,
    sup_pair,
)
from orderfp.space import SpaceSpec, convexity_profile


def _cmd_modulus(args) -> int:
    space = SpaceSpec(dim=args.dim, p=args.p)
    profile = convexity_profile(space, n_grid=args.eps_grid)
    lines = ["epsilon,delta"]
    lines += [f"{float(e)!r},{float(d)!r}" for e, d in zip(profile.epsilons, profile.deltas)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(profile.epsilons)} grid points to {args.out}")
    else:
        print(text, end="")
    print(f"characteristic of convexity (grid estimate): {profile.eps0!r}", file=sys.stderr)
    return 0


def _cmd_order_check(args) -> int:
    cone = ConeSpec(kind=args.cone, dim=args.dim)
    space = SpaceSpec(dim=args.dim, p=args.p)
    rng = np.random.default_rng(args.seed)

    gamma = normality_constant_estimate(cone, space, args.samples, seed=args.seed)
    mono = is_norm_monotonic(cone, space, args.samples, seed=args.seed)

    antisym_ok = True
    for _ in range(args.samples):
        x = sample_cone_point(cone, rng)
        y = sample_cone_point(cone, rng)
        if leq(cone, x, y) and leq(cone, y, x) and float(np.max(np.abs(x - y))) > 1e-9:
            antisym_ok = False
            break

    lattice = "unsupported (not minihedral)"
    if cone.kind == "orthant":
        ok = True
        for _ in range(args.samples):
            x = sample_cone_point(cone, rng)
            y = sample_cone_point(cone, rng)
            z = sample_cone_point(cone, rng)
            ok &= bool(np.array_equal(sup_pair(cone, x, x), x))
            ok &= bool(np.array_equal(sup_pair(cone, x, y), sup_pair(cone, y, x)))
            ok &= bool(np.array_equal(sup_pair(cone, x, inf_pair(cone, x, z)), x))
            if not ok:
                break
        lattice = "pass" if ok else "FAIL"
    else:
        try:
            sup_pair(cone, np.zeros(args.dim), np.zeros(args.dim))
        except UnsupportedConeOperation:
            pass

    print(f"cone                 : {cone.kind} (dim={cone.dim}, p={space.p})")
    print(f"normality estimate   : {gamma!r} (sampled lower bound)")
    print(f"monotonic norm       : {mono.verdict}")
    if not mono.passed:
        print(f"  witness: {mono.violations[0].describe()}")
    print(f"antisymmetry sampled : {'pass' if antisym_ok else 'FAIL'}")
    print(f"lattice axioms       : {lattice}")
    return 0 if (mono.passed and antisym_ok) else 1


def _cmd_check_mapping(args) -> int:
    spec = load_mapping(args.map)
    cone = spec.domain.cone if args.cone is None else ConeSpec(kind=args.cone, dim=spec.dim)
    space = SpaceSpec(dim=spec.dim, p=args.p)
    cfg = SamplerConfig(n_samples=args.samples, seed=args.seed)

    reports = [
        is_monotone(spec, cone, cfg),
        is_monotone_nonexpansive(spec, cone, space, cfg),
        is_alpha_nonexpansive(spec, cone, space, args.alpha, cfg),
    ]
    if space.p == 2.0:
        reports.extend(classify_hilbert_classes(spec, space, cfg).values())

    width = max(len(r.name) for r in reports)
    for r in reports:
        extra = f" (alpha={r.alpha})" if r.alpha is not None else ""
        print(f"{r.name:<{width}} : {r.verdict}{extra}  [{r.samples} samples, {len(r.violations)} violations]")
        if r.violations:
            print(f"  witness: {r.violations[0].describe()}")
    if args.json:
        payload = [
            {
                "property": r.name,
                "alpha": r.alpha,
                "samples": r.samples,
                "verdict": r.verdict,
                "violations": [
                    {"x": v.x.tolist(), "y": v.y.tolist(), "lhs": v.lhs, "rhs": v.rhs}
                    for v in r.violations
                ],
            }
            for r in reports
        ]
        Path(args.json).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return 0 if all(r.passed for r in reports) else 1


def _parse_vector(text: str, dim: int) -> np.ndarray:
    if text == "zero":
        return np.zeros(dim)
    return np.asarray([float(tok) for tok in text.split(",")], dtype=float)


def _cmd_iterate(args) -> int:
    spec = load_mapping(args.map)
    cone = spec.domain.cone
    space = SpaceSpec(dim=spec.dim, p=args.p)
    x0 = _parse_vector(args.x0, spec.dim)
    cfg = IterationConfig(
        max_iter=args.max_iter,
        residual_tol=args.residual_tol,
        bound_threshold=args.bound_threshold,
    )
    if args.scheme == "picard":
        record = picard_orbit(spec, x0, cone, space, cfg)
    else:
        beta = [float(tok) for tok in args.beta.split(",")] if "," in args.beta else float(args.beta)
        record = mann_orbit(spec, x0, beta, cone, space, cfg)
    write_orbit_csv(record, args.out)
    print(
        f"{record.scheme} orbit: {len(record)} points, verdict={record.verdict}, "
        f"order={record.order_monotone}, final residual={float(record.residuals[-1])!r}"
    )
    return 0


def _cmd_asym_center(args) -> int:
    points = read_orbit_points(args.orbit)
    dim = points.shape[1]
    cone = ConeSpec(kind="orthant", dim=dim)
    space = SpaceSpec(dim=dim, p=args.p)
    if not (0 <= args.tail_from < points.shape[0]):
        print(f"tail offset {args.tail_from} out of range", file=sys.stderr)
        return 2
    problem = make_problem(points[args.tail_from :], cone, space)
    map_spec = load_mapping(args.map) if args.map else None
    result = solve_asym_center(problem, map_spec=map_spec)
    lines = [
        f"tail points          : {problem.tail.shape[0]} (from index {args.tail_from})",
        f"center z             : {np.array2string(result.z, precision=10)}",
        f"attained radius r    : {result.r!r}",
        f"certified lower bound: {result.certified_lower_bound!r}",
        f"optimality gap       : {result.gap!r}",
        f"subgradient iters    : {result.iterations}",
        f"fixed-point residual : {result.fixed_point_residual!r}",
    ]
    if map_spec is not None:
        fixed = verify_center_is_fixed(map_spec, result, tol=args.fixed_tol)
        lines.append(f"center fixed (tol {args.fixed_tol}) : {fixed}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


def _cmd_verify(args) -> int:
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    config = load_config(args.config)
    reports, _ = run_suites(suites, config, seed=args.seed, out_dir=args.out)
    text = summary_table(reports)
    print(text, end="")
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orderfp",
        description="Fixed-point iteration and order-geometry experiments in lp spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mod = sub.add_parser("modulus", help="tabulate the modulus of convexity")
    p_mod.add_argument("--p", type=float, required=True)
    p_mod.add_argument("--eps-grid", type=int, default=101, help="number of grid points on [0, 2]")
    p_mod.add_argument("--dim", type=int, default=2)
    p_mod.add_argument("--out", type=str, default=None, help="CSV output path (default: stdout)")
    p_mod.set_defaults(func=_cmd_modulus)

    p_order = sub.add_parser("order", help="cone order diagnostics")
    order_sub = p_order.add_subparsers(dest="order_command", required=True)
    p_check = order_sub.add_parser("check", help="run the cone diagnostics table")
    p_check.add_argument("--cone", choices=["orthant", "lorentz"], required=True)
    p_check.add_argument("--dim", type=int, required=True)
    p_check.add_argument("--samples", type=int, default=500)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--p", type=float, default=2.0)
    p_check.set_defaults(func=_cmd_order_check)

    p_map = sub.add_parser("check-mapping", help="run mapping-class verifiers on a mapping file")
    p_map.add_argument("--map", type=str, required=True, help="mapping JSON file")
    p_map.add_argument("--cone", choices=["orthant", "lorentz"], default=None,
                       help="override the order cone (default: the map's domain cone)")
    p_map.add_argument("--p", type=float, default=2.0)
    p_map.add_argument("--alpha", type=float, default=0.0)
    p_map.add_argument("--samples", type=int, default=500)
    p_map.add_argument("--seed", type=int, default=0)
    p_map.add_argument("--json", type=str, default=None, help="also write the reports as JSON")
    p_map.set_defaults(func=_cmd_check_mapping)

    p_it = sub.add_parser("iterate", help="generate a Picard or Mann orbit as CSV")
    p_it.add_argument("--map", type=str, required=True)
    p_it.add_argument("--x0", type=str, default="zero", help='"zero" or comma-separated coordinates')
    p_it.add_argument("--scheme", choices=["picard", "mann"], default="picard")
    p_it.add_argument("--beta", type=str, default="0.5", help="Mann coefficient or comma list")
    p_it.add_argument("--out", type=str, required=True)
    p_it.add_argument("--p", type=float, default=2.0)
    p_it.add_argument("--max-iter", type=int, default=100_000)
    p_it.add_argument("--residual-tol", type=float, default=1e-10)
    p_it.add_argument("--bound-threshold", type=float, default=1e8)
    p_it.set_defaults(func=_cmd_iterate)

    p_ac = sub.add_parser("asym-center", help="solve the asymptotic-center problem for an orbit CSV")
    p_ac.add_argument("--orbit", type=str, required=True, help="orbit CSV written by `iterate`")
    p_ac.add_argument("--tail-from", type=int, required=True)
    p_ac.add_argument("--out", type=str, default=None, help="write the report to this file")
    p_ac.add_argument("--map", type=str, default=None, help="mapping JSON for the fixed-point residual")
    p_ac.add_argument("--p", type=float, default=2.0)
    p_ac.add_argument("--fixed-tol", type=float, default=1e-6)
    p_ac.set_defaults(func=_cmd_asym_center)

    p_ver = sub.add_parser("verify", help="run the verification suites")
    p_ver.add_argument("--suite", choices=list(SUITES) + ["all"], required=True)
    p_ver.add_argument("--config", type=str, default=None, help="JSON config file")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--out", type=str, required=True, help="output directory")
    p_ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
