"""Command-line interface.

Subcommands: sweep, simulate, roots, nyquist, circle, genfuncs.  Exit code
0 on success, 1 on invalid input or configuration, 2 on internal failures.
The default output directory comes from CTGRAD_OUTPUT_DIR when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .algorithms import AlgorithmSpec
from .errors import (
    ContourSingularityError,
    DegenerateFamilyError,
    DomainError,
    MarginalStabilityError,
    PreconditionError,
    RootFindingError,
)
from .experiments import (
    ExperimentConfig,
    emit_plot_data,
    resolve_algorithm,
    run_sweep,
)
from .integrator import SimConfig, simulate, trajectory_to_csv
from .polynomials import char_poly, find_roots
from .stability import circle_criterion, nyquist_curve, transfer_function, winding_number
from .testfunctions import PiecewiseQuadratic, QuadraticObjective, sample_function, sector_alpha


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # report usage problems through exit code 1 like other validation errors
    def error(self, message):
        raise _UsageError(message)


def _output_dir(value) -> str:
    if value is not None:
        return value
    return os.environ.get("CTGRAD_OUTPUT_DIR", ".")


def _load_spec(args, kappa) -> AlgorithmSpec:
    if args.spec_file:
        with open(args.spec_file) as fh:
            return AlgorithmSpec.from_dict(json.load(fh))
    if not args.algorithm:
        raise _UsageError("provide --algorithm or --spec-file")
    return resolve_algorithm(args.algorithm, kappa)


def _add_spec_args(p):
    p.add_argument("--algorithm", help='descriptor: gradient_flow | heavy_ball | fast_kth:<k>')
    p.add_argument("--spec-file", help="JSON file with fields k, g, h, label")
    p.add_argument("--kappa", type=float, default=None, help="condition number")


def _require_kappa(args) -> float:
    if args.kappa is None:
        raise _UsageError("--kappa is required")
    return args.kappa


def _cmd_sweep(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
    else:
        cfg = ExperimentConfig()
    overrides = {}
    if args.kappas is not None:
        overrides["kappas"] = tuple(float(v) for v in args.kappas.split(","))
    if args.algorithms is not None:
        overrides["algorithms"] = tuple(v.strip() for v in args.algorithms.split(","))
    if args.n_functions is not None:
        overrides["n_functions"] = args.n_functions
    if args.n_initial_conditions is not None:
        overrides["n_initial_conditions"] = args.n_initial_conditions
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.init_std is not None:
        overrides["init_std"] = args.init_std
    sim_over = {}
    for name in ("dt", "tol", "t_max"):
        v = getattr(args, name)
        if v is not None:
            sim_over[name] = v
    if args.record_stride is not None:
        sim_over["record_stride"] = args.record_stride
    if sim_over:
        base = cfg.sim
        overrides["sim"] = SimConfig(
            dt=sim_over.get("dt", base.dt),
            tol=sim_over.get("tol", base.tol),
            t_max=sim_over.get("t_max", base.t_max),
            record_stride=sim_over.get("record_stride", base.record_stride),
        )
    overrides["output_dir"] = _output_dir(args.output_dir)
    cfg = ExperimentConfig(**{**_config_dict(cfg), **overrides})
    runs, summaries = run_sweep(cfg)
    paths = emit_plot_data(runs, summaries, cfg.output_dir)
    print(f"{len(runs)} runs, {len(summaries)} summary rows")
    for key in ("runs", "summaries", "theory"):
        print(f"{key}: {paths[key]}")
    return 0


def _config_dict(cfg: ExperimentConfig) -> dict:
    return {
        "kappas": cfg.kappas,
        "algorithms": cfg.algorithms,
        "n_functions": cfg.n_functions,
        "n_initial_conditions": cfg.n_initial_conditions,
        "seed": cfg.seed,
        "init_std": cfg.init_std,
        "sim": cfg.sim,
        "output_dir": cfg.output_dir,
    }


def _cmd_simulate(args) -> int:
    kappa = args.kappa if args.kappa is not None else 1.0
    spec = _load_spec(args, kappa)
    if args.function_file:
        with open(args.function_file) as fh:
            data = json.load(fh)
        if isinstance(data, list):
            data = data[args.function_index]
        objective = PiecewiseQuadratic.from_dict(data)
    elif args.quadratic is not None:
        objective = QuadraticObjective(args.quadratic)
    else:
        raise _UsageError("provide --quadratic LAMBDA or --function-file PATH")
    if args.z0:
        z0 = np.array([float(v) for v in args.z0.split(",")])
    else:
        rng = np.random.default_rng(args.seed if args.seed is not None else 0)
        z0 = args.init_std * rng.standard_normal(spec.k)
    cfg = SimConfig(dt=args.dt, tol=args.tol, t_max=args.t_max,
                    record_stride=args.record_stride)
    traj = simulate(spec, objective, z0, cfg)
    out = args.output or os.path.join(_output_dir(args.output_dir), "trajectory.csv")
    trajectory_to_csv(traj, out)
    print(f"terminated_by: {traj.terminated_by.value}")
    print(f"t_end: {traj.t_end!r}")
    print(f"samples: {len(traj.times)}")
    print(f"trajectory: {out}")
    return 0


def _cmd_roots(args) -> int:
    kappa = args.kappa if args.kappa is not None else 1.0
    spec = _load_spec(args, kappa)
    lams = []
    if args.lambda_f is not None:
        lams = [args.lambda_f]
    elif args.lambda_grid:
        lo, hi, n = args.lambda_grid.split(":")
        lams = list(np.linspace(float(lo), float(hi), int(n)))
    else:
        raise _UsageError("provide --lambda-f or --lambda-grid lo:hi:n")
    rows = []
    for lam in map(float, lams):
        rs = find_roots(char_poly(spec, lam))
        for z in rs.roots:
            rows.append((lam, z))
        print(f"lambda_f={lam!r} max_real={rs.max_real!r}")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write("lambda_f,root_re,root_im\n")
            for lam, z in rows:
                fh.write(f"{lam!r},{z.real!r},{z.imag!r}\n")
        print(f"roots: {args.output}")
    return 0


def _cmd_nyquist(args) -> int:
    kappa = _require_kappa(args)
    spec = _load_spec(args, kappa)
    if args.lambda_f is None:
        raise _UsageError("--lambda-f is required")
    tf = transfer_function(spec, kappa)
    gain = args.lambda_f - 1.0 / kappa
    if gain < 0.0 or args.lambda_f > 1.0:
        raise DomainError(f"lambda_f must lie in [1/kappa, 1], got {args.lambda_f}")
    curve = nyquist_curve(tf, gain, shift=args.shift)
    w = winding_number(curve)
    print(f"winding: {w}")
    print(f"stable: {str(w == 0).lower()}")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write("omega,re,im\n")
            for om, pt in zip(curve.omegas, curve.points):
                fh.write(f"{float(om)!r},{pt.real!r},{pt.imag!r}\n")
        print(f"curve: {args.output}")
    return 0


def _cmd_circle(args) -> int:
    kappa = _require_kappa(args)
    spec = _load_spec(args, kappa)
    if args.alpha_s is None:
        raise _UsageError("--alpha-s is required")
    ok, case = circle_criterion(spec, kappa, args.alpha_s)
    print(f"case: {case}")
    print(f"ok: {str(ok).lower()}")
    return 0


def _cmd_genfuncs(args) -> int:
    if args.mu is not None:
        mu = args.mu
    elif args.kappa is not None:
        mu = 1.0 / args.kappa
    else:
        raise _UsageError("provide --mu or --kappa")
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    funcs = [sample_function(rng, mu) for _ in range(args.count)]
    payload = [f.to_dict() for f in funcs]
    text = json.dumps(payload, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        print(f"functions: {args.output}")
    else:
        print(text)
    for i, f in enumerate(funcs):
        print(f"function {i}: sector_alpha={sector_alpha(f)!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ctgrad", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sweep", help="run a full experiment sweep and write CSVs")
    ps.add_argument("--config", help="JSON experiment config")
    ps.add_argument("--kappas", help="comma-separated condition numbers")
    ps.add_argument("--algorithms", help="comma-separated descriptors")
    ps.add_argument("--n-functions", type=int)
    ps.add_argument("--n-initial-conditions", type=int)
    ps.add_argument("--seed", type=int)
    ps.add_argument("--init-std", type=float)
    ps.add_argument("--dt", type=float)
    ps.add_argument("--tol", type=float)
    ps.add_argument("--t-max", type=float)
    ps.add_argument("--record-stride", type=int)
    ps.add_argument("--output-dir")
    ps.set_defaults(func=_cmd_sweep)

    pm = sub.add_parser("simulate", help="integrate one trajectory and write it as CSV")
    _add_spec_args(pm)
    pm.add_argument("--quadratic", type=float, metavar="LAMBDA",
                    help="use the quadratic objective with this curvature")
    pm.add_argument("--function-file", help="JSON test function (or list of them)")
    pm.add_argument("--function-index", type=int, default=0)
    pm.add_argument("--z0", help="comma-separated initial state")
    pm.add_argument("--seed", type=int, help="seed for a random initial state")
    pm.add_argument("--init-std", type=float, default=4.5)
    pm.add_argument("--dt", type=float, default=0.01)
    pm.add_argument("--tol", type=float, default=1e-8)
    pm.add_argument("--t-max", type=float, default=1e5)
    pm.add_argument("--record-stride", type=int, default=10)
    pm.add_argument("--output")
    pm.add_argument("--output-dir")
    pm.set_defaults(func=_cmd_simulate)

    pr = sub.add_parser("roots", help="characteristic roots at one or many curvatures")
    _add_spec_args(pr)
    pr.add_argument("--lambda-f", type=float)
    pr.add_argument("--lambda-grid", metavar="LO:HI:N")
    pr.add_argument("--output")
    pr.set_defaults(func=_cmd_roots)

    pn = sub.add_parser("nyquist", help="winding number of the loop response")
    _add_spec_args(pn)
    pn.add_argument("--lambda-f", type=float)
    pn.add_argument("--shift", type=float, default=0.0)
    pn.add_argument("--output")
    pn.set_defaults(func=_cmd_nyquist)

    pc = sub.add_parser("circle", help="circle-criterion check for a curvature sector")
    _add_spec_args(pc)
    pc.add_argument("--alpha-s", type=float)
    pc.set_defaults(func=_cmd_circle)

    pg = sub.add_parser("genfuncs", help="sample random test functions as JSON")
    pg.add_argument("--mu", type=float)
    pg.add_argument("--kappa", type=float)
    pg.add_argument("--count", type=int, default=1)
    pg.add_argument("--seed", type=int)
    pg.add_argument("--output")
    pg.set_defaults(func=_cmd_genfuncs)
    return p


_VALIDATION_ERRORS = (
    _UsageError,
    DomainError,
    DegenerateFamilyError,
    ContourSingularityError,
    PreconditionError,
    ValueError,
    FileNotFoundError,
    json.JSONDecodeError,
    KeyError,
)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (RootFindingError, MarginalStabilityError, ArithmeticError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
