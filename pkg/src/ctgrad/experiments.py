"""Deterministic sweep experiments across condition numbers and algorithms.

Every random draw is keyed by a splitmix64 hash of (seed, stream tag,
indices), so any single run can be regenerated bitwise without executing
the rest of the sweep, and results do not depend on execution order.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .algorithms import AlgorithmSpec, fast_kth, gradient_flow, heavy_ball
from .errors import DomainError
from .integrator import SimConfig, TerminationReason, _run_batch, rk4_stability_check
from .rates import aggregate, estimate_rate
from .testfunctions import FunctionBatch, PiecewiseQuadratic, sample_function

_FUNCTION_STREAM = 1
_IC_STREAM = 2

RUNS_FILENAME = "runs.csv"
SUMMARY_FILENAME = "summaries.csv"
THEORY_FILENAME = "theory.csv"

_RUNS_HEADER = "kappa,algorithm,function_id,ic_id,rho_sim,c_sim,t_end,terminated_by"
_SUMMARY_HEADER = "kappa,algorithm,n_runs,mean_rho,std_rho,mean_c,std_c"
_THEORY_HEADER = "kappa,inv_kappa,inv_sqrt_kappa,inv_cbrt_kappa"


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return (z ^ (z >> 31)) & 0xFFFFFFFFFFFFFFFF


def subseed(seed: int, *parts: int) -> int:
    """Collision-resistant child seed from a root seed and index tuple."""
    acc = _splitmix64(int(seed) & 0xFFFFFFFFFFFFFFFF)
    for p in parts:
        acc = _splitmix64(acc ^ (int(p) & 0xFFFFFFFFFFFFFFFF))
    return acc


def function_seed(seed: int, kappa_index: int, function_id: int) -> int:
    return subseed(seed, _FUNCTION_STREAM, kappa_index, function_id)


def ic_seed(seed: int, kappa_index: int, function_id: int, ic_id: int) -> int:
    return subseed(seed, _IC_STREAM, kappa_index, function_id, ic_id)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs; identical configs give identical output."""

    kappas: tuple[float, ...] = (4.0, 16.0, 64.0, 256.0)
    algorithms: tuple = ("heavy_ball", "fast_kth:3")
    n_functions: int = 10
    n_initial_conditions: int = 10
    seed: int = 0
    init_std: float = 4.5
    sim: SimConfig = field(default_factory=SimConfig)
    output_dir: str = "."

    def __post_init__(self):
        object.__setattr__(self, "kappas", tuple(float(v) for v in self.kappas))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "n_functions", int(self.n_functions))
        object.__setattr__(self, "n_initial_conditions", int(self.n_initial_conditions))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "init_std", float(self.init_std))
        if not self.kappas or any(v < 1.0 for v in self.kappas):
            raise DomainError("kappas must be a nonempty tuple of values >= 1")
        if self.n_functions < 1 or self.n_initial_conditions < 1:
            raise DomainError("need at least one function and one initial condition")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 bits")
        if not self.init_std > 0.0:
            raise DomainError("init_std must be positive")
        for desc in self.algorithms:
            resolve_algorithm(desc, self.kappas[0])  # validates descriptors early

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        d = dict(d)
        if "sim" in d and isinstance(d["sim"], dict):
            sim = dict(d["sim"])
            if "record_stride" in sim:
                sim["record_stride"] = int(sim["record_stride"])
            d["sim"] = SimConfig(**sim)
        if "kappas" in d:
            d["kappas"] = tuple(d["kappas"])
        if "algorithms" in d:
            d["algorithms"] = tuple(d["algorithms"])
        if "seed" in d:
            d["seed"] = int(d["seed"])
        return ExperimentConfig(**d)

    @staticmethod
    def from_json(path) -> "ExperimentConfig":
        with open(path) as fh:
            return ExperimentConfig.from_dict(json.load(fh))


def resolve_algorithm(desc, kappa: float) -> AlgorithmSpec:
    """Turn a descriptor into a spec at a given condition number.

    Accepts an AlgorithmSpec (used as-is), a dict with keys k/g/h/label,
    or one of the strings "gradient_flow", "heavy_ball", "fast_kth:<k>".
    """
    if isinstance(desc, AlgorithmSpec):
        return desc
    if isinstance(desc, dict):
        return AlgorithmSpec.from_dict(desc)
    if isinstance(desc, str):
        name = desc.strip()
        if name == "gradient_flow":
            return gradient_flow()
        if name == "heavy_ball":
            return heavy_ball(kappa)
        if name.startswith("fast_kth:"):
            return fast_kth(int(name.split(":", 1)[1]), kappa)
        raise ValueError(f"unknown algorithm descriptor {desc!r}")
    raise ValueError(f"unknown algorithm descriptor {desc!r}")


@dataclass(frozen=True)
class RunRecord:
    """One (kappa, algorithm, function, initial condition) simulation result."""

    kappa: float
    algorithm: str
    function_id: int
    ic_id: int
    rho_sim: float
    c_sim: float
    t_end: float
    terminated_by: str


def make_function(cfg: ExperimentConfig, kappa_index: int, function_id: int) -> PiecewiseQuadratic:
    """Regenerate the sampled test function for one sweep cell."""
    kappa = cfg.kappas[kappa_index]
    rng = np.random.default_rng(function_seed(cfg.seed, kappa_index, function_id))
    return sample_function(rng, 1.0 / kappa)


def make_initial_state(cfg: ExperimentConfig, kappa_index: int, function_id: int,
                       ic_id: int, k: int) -> np.ndarray:
    """Regenerate the i.i.d. normal initial state for one run (dimension k)."""
    rng = np.random.default_rng(ic_seed(cfg.seed, kappa_index, function_id, ic_id))
    return cfg.init_std * rng.standard_normal(k)


def run_sweep(cfg: ExperimentConfig):
    """Execute the full sweep; returns (runs, summaries).

    At each kappa the same n_functions sampled objectives are shared by
    every algorithm, with n_initial_conditions runs each.  A step-size
    stability failure produces a warning, not an error; divergent runs are
    recorded but excluded from the aggregates.
    """
    runs = []
    summaries = []
    for ik, kappa in enumerate(cfg.kappas):
        funcs = [make_function(cfg, ik, fi) for fi in range(cfg.n_functions)]
        batch_obj = FunctionBatch(funcs)
        n_ic = cfg.n_initial_conditions
        for desc in cfg.algorithms:
            spec = resolve_algorithm(desc, kappa)
            ok, worst = rk4_stability_check(spec, kappa, cfg.sim.dt)
            if not ok:
                warnings.warn(
                    f"dt = {cfg.sim.dt} is outside the stability region for "
                    f"{spec.label} at kappa = {kappa} (worst dt*s = {worst:.4g})",
                    stacklevel=2,
                )
            Z0 = np.empty((cfg.n_functions * n_ic, spec.k))
            run_keys = []
            for fi in range(cfg.n_functions):
                for ici in range(n_ic):
                    Z0[len(run_keys)] = make_initial_state(cfg, ik, fi, ici, spec.k)
                    run_keys.append((fi, ici))
            func_rows = np.repeat(np.arange(cfg.n_functions), n_ic)

            def grad_fn(P, idx, rows=func_rows, obj=batch_obj):
                return obj.grad(P, rows[idx])

            g = np.asarray(spec.g, dtype=float)
            h = np.asarray(spec.h, dtype=float)
            results = _run_batch(spec, g, h, grad_fn, Z0, 1, cfg.sim, keep_states=False)

            estimates = []
            n_divergent = 0
            for (fi, ici), res in zip(run_keys, results):
                reason = res["reason"]
                if reason is TerminationReason.DIVERGENCE:
                    n_divergent += 1
                    runs.append(RunRecord(kappa, spec.label, fi, ici,
                                          float("nan"), float("nan"),
                                          float(res["times"][-1]), reason.value))
                    continue
                est = estimate_rate(_TrajView(res["times"], res["norms"]))
                estimates.append(est)
                runs.append(RunRecord(kappa, spec.label, fi, ici,
                                      est.rho_sim, est.c_sim,
                                      float(res["times"][-1]), reason.value))
            if estimates:
                summary = replace(aggregate(estimates, kappa, spec.label),
                                  n_divergent=n_divergent)
                summaries.append(summary)
            else:
                warnings.warn(
                    f"every run diverged for {spec.label} at kappa = {kappa}; "
                    "no summary row emitted",
                    stacklevel=2,
                )
    return runs, summaries


class _TrajView:
    """Minimal times/norms carrier accepted by estimate_rate."""

    def __init__(self, times, norms):
        self.times = times
        self.norms = norms


def _fmt(v) -> str:
    return repr(float(v))


def emit_plot_data(runs, summaries, output_dir) -> dict:
    """Write runs.csv, summaries.csv and theory.csv; returns their paths.

    Rows are sorted on (kappa, algorithm, function_id, ic_id) and floats
    formatted with repr, so identical results give byte-identical files.
    theory.csv tabulates the reference rates kappa**(-1), kappa**(-1/2),
    kappa**(-1/3) at each swept kappa.
    """
    os.makedirs(output_dir, exist_ok=True)
    paths = {
        "runs": os.path.join(output_dir, RUNS_FILENAME),
        "summaries": os.path.join(output_dir, SUMMARY_FILENAME),
        "theory": os.path.join(output_dir, THEORY_FILENAME),
    }
    with open(paths["runs"], "w") as fh:
        fh.write(_RUNS_HEADER + "\n")
        for r in sorted(runs, key=lambda r: (r.kappa, r.algorithm, r.function_id, r.ic_id)):
            fh.write(",".join([
                _fmt(r.kappa), r.algorithm, str(r.function_id), str(r.ic_id),
                _fmt(r.rho_sim), _fmt(r.c_sim), _fmt(r.t_end), r.terminated_by,
            ]) + "\n")
    with open(paths["summaries"], "w") as fh:
        fh.write(_SUMMARY_HEADER + "\n")
        for s in sorted(summaries, key=lambda s: (s.kappa, s.algorithm)):
            fh.write(",".join([
                _fmt(s.kappa), s.algorithm, str(s.n_runs),
                _fmt(s.mean_rho), _fmt(s.std_rho), _fmt(s.mean_c), _fmt(s.std_c),
            ]) + "\n")
    kappas = sorted({s.kappa for s in summaries} | {r.kappa for r in runs})
    with open(paths["theory"], "w") as fh:
        fh.write(_THEORY_HEADER + "\n")
        for kappa in kappas:
            fh.write(",".join([
                _fmt(kappa), _fmt(1.0 / kappa), _fmt(kappa ** -0.5), _fmt(kappa ** (-1.0 / 3.0)),
            ]) + "\n")
    return paths
