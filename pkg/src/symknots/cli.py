"""Command-line interface.

Exit codes: 0 success, 2 bad usage or input, 3 computation error,
4 flow stopped at the step limit, 5 a check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import constructions as co
from . import curve as cv
from . import energies as en
from . import io, kernels
from .dihedral import symmetrize, symmetry_defect
from .errors import SymknotsError
from .flow import TRAJECTORY_COLUMNS, FlowConfig, convergence_study, run_flow

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COMPUTE = 3
EXIT_NOT_CONVERGED = 4
EXIT_CHECK_FAILED = 5

# error codes that mean "the user asked for something invalid"
_USAGE_CODES = {"bad-params", "eps-too-large", "parse", "bad-grid"}

STUDY_COLUMNS = ("eps", "e2", "e1", "e0", "e2_over_sqrt_eps", "e1_over_sqrt_eps")


def _fail(exc: SymknotsError, usage_codes=_USAGE_CODES) -> int:
    print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE if exc.code in usage_codes else EXIT_COMPUTE


def _read(path):
    return io.read_curve(path)


def cmd_construct(args) -> int:
    try:
        if args.shape == "circle":
            curve, meta = co.unit_circle(args.n), {}
        elif args.shape == "tpc-pi":
            curve, meta = co.tpc_pi(args.n, args.plane), {"plane": args.plane}
        elif args.shape == "tpc0":
            curve, meta = co.doubly_covered_circle(args.n), {}
        else:
            if args.b is None or args.eps is None:
                raise SymknotsError("bad-params", "torus needs --b and --eps")
            p = co.TorusKnotParams(args.b, args.eps, rho=args.rho)
            curve = co.torus_knot(p, args.n)
            meta = {"b": p.b, "eps": p.eps, "rho": p.rho, "r": p.r, "label": co.knot_label(p)}
    except SymknotsError as exc:
        # the grid size is a flag too, so every construction error is a usage error
        return _fail(exc, _USAGE_CODES | {"tangent-constraint", "endpoint-constraint"})
    meta = {"shape": args.shape, "n": args.n, **meta}
    io.write_curve(args.out, curve, meta)
    return EXIT_OK


def cmd_energy(args) -> int:
    try:
        curve, _ = _read(args.input)
        params = en.EnergyParams(args.q, args.theta)
        report = en.energy_report(curve, params)
    except SymknotsError as exc:
        return _fail(exc)
    print(json.dumps(report.to_dict(), indent=1))
    return EXIT_OK


def cmd_flow(args) -> int:
    try:
        curve, meta = _read(args.input)
        if args.noise > 0:
            rng = np.random.default_rng(args.seed)
            pts = curve.points + args.noise * rng.standard_normal(curve.points.shape)
            curve = cv.make_curve(curve.ell, pts)
            if args.symmetric:
                curve = symmetrize(curve)
        config = FlowConfig(
            params=en.EnergyParams(args.q, args.theta),
            max_steps=args.steps,
            tol=args.tol,
            symmetric=args.symmetric,
            reparam_interval=args.reparam_interval,
            log_interval=args.log_interval,
            metric=args.metric,
        )
    except SymknotsError as exc:
        return _fail(exc)
    try:
        final, trajectory, state = run_flow(curve, config)
    except SymknotsError as exc:
        return _fail(exc, set())
    meta = dict(meta)
    meta.update({"flow_steps": state.step, "residual": state.residual, "lambda": state.lam})
    io.write_curve(args.out, final, meta)
    if args.log:
        io.write_table(args.log, TRAJECTORY_COLUMNS, [r.as_row() for r in trajectory])
    print(f"steps {state.step}  scaled {state.scaled:.12g}  residual {state.residual:.3e}")
    return EXIT_OK if state.residual <= args.tol else EXIT_NOT_CONVERGED


def cmd_check(args) -> int:
    try:
        curve, _ = _read(args.input)
    except SymknotsError as exc:
        return _fail(exc)
    if args.what == "symmetry":
        value = symmetry_defect(curve)
        ok = value <= args.tol
        print(f"symmetry_defect {value:.6e}")
    elif args.what == "embedded":
        try:
            arc = curve if cv.check_arclength(curve) else cv.reparametrize_arclength(curve)
            value = cv.bilipschitz_constant(arc)
        except SymknotsError as exc:
            return _fail(exc)
        ok = value > args.tol
        print(f"bilipschitz {value:.6e}")
    else:
        value = cv.max_radius(curve)
        bound = cv.length(curve) / 4 + 2 * curve.h
        ok = value <= bound
        print(f"max_radius {value:.6e}  bound {bound:.6e}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_study(args) -> int:
    try:
        eps_list = [float(v) for v in args.eps.split(",") if v.strip()]
    except ValueError:
        print(f"error: cannot parse eps list {args.eps!r}", file=sys.stderr)
        return EXIT_USAGE
    limit = co.rate_eps(args.b)
    for eps in eps_list:
        if limit <= eps < co.max_eps(args.b):
            print(f"warning: eps={eps} is outside (0, 1/(8(|b|+1))) = (0, {limit:g})", file=sys.stderr)
    try:
        rows = convergence_study(args.b, eps_list, args.m)
    except SymknotsError as exc:
        return _fail(exc)
    if args.out:
        io.write_table(args.out, STUDY_COLUMNS, rows)
    else:
        print(",".join(STUDY_COLUMNS))
        for row in rows:
            print(",".join(repr(float(v)) for v in row))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symknots", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=1, help="threads for the pair kernels")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write a symmetric test curve")
    p.add_argument("--shape", required=True, choices=["circle", "tpc-pi", "tpc0", "torus"])
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--b", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--rho", type=float, default=None, help="helix radius (default eps^2)")
    p.add_argument("--plane", default="e3perp", choices=["e3perp", "e1perp"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("energy", help="print the energy report of a curve file")
    p.add_argument("input")
    p.add_argument("--q", type=float, default=3.0)
    p.add_argument("--theta", type=float, default=0.0)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("flow", help="run the length-normalized descent")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--log", help="trajectory CSV")
    p.add_argument("--q", type=float, default=3.0)
    p.add_argument("--theta", type=float, default=1e-3)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--symmetric", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--reparam-interval", type=int, default=25)
    p.add_argument("--log-interval", type=int, default=1)
    p.add_argument("--metric", choices=["sobolev", "euclidean"], default="sobolev")
    p.add_argument("--noise", type=float, default=0.0, help="perturb the input nodes first")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("check", help="test symmetry, embeddedness or the radius bound")
    p.add_argument("input")
    p.add_argument("--what", required=True, choices=["symmetry", "embedded", "bounds"])
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("study", help="torus-knot convergence table")
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--eps", default="0.04,0.01,0.0025")
    p.add_argument("--m", type=int, default=4096)
    p.add_argument("--out")
    p.set_defaults(func=cmd_study)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    kernels.set_threads(args.threads)
    with np.errstate(all="ignore"):
        return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
