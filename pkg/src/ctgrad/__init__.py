"""Continuous-time gradient dynamics: rates, stability tests, experiments.

The library covers the analysis pipeline for k-th order gradient-based
ODE methods on strongly convex problems: characteristic polynomials and
worst-case decay rates, Nyquist and circle stability certificates,
Kharitonov vertex checks for interval families, randomized piecewise
quadratic test functions, fixed-step RK4 simulation, and deterministic
experiment sweeps with CSV output.
"""

from .algorithms import (
    AlgorithmSpec,
    VectorField,
    eval_field,
    fast_kth,
    gradient_flow,
    heavy_ball,
    linearized_matrix,
)
from .errors import (
    ContourSingularityError,
    DegenerateFamilyError,
    DivergenceError,
    DomainError,
    EstimationError,
    MarginalStabilityError,
    PreconditionError,
    RootFindingError,
    SamplingError,
)
from .experiments import (
    ExperimentConfig,
    RunRecord,
    emit_plot_data,
    function_seed,
    ic_seed,
    make_function,
    make_initial_state,
    resolve_algorithm,
    run_sweep,
    subseed,
)
from .integrator import (
    SimConfig,
    TerminationReason,
    Trajectory,
    rk4_stability_check,
    rk4_step,
    simulate,
    trajectory_to_csv,
)
from .polynomials import (
    IntervalPolynomial,
    Polynomial,
    RootSet,
    char_poly,
    charpoly_interval,
    find_roots,
    from_roots,
    is_hurwitz,
    kharitonov_polys,
    root_product,
    worst_rate,
)
from .rates import RateEstimate, SweepSummary, aggregate, estimate_rate
from .stability import (
    NyquistCurve,
    TransferFunction,
    cancel_common_factor,
    circle_criterion,
    default_omega_grid,
    nyquist_curve,
    nyquist_stable,
    transfer_function,
    winding_number,
)
from .testfunctions import (
    BREAKPOINTS,
    FunctionBatch,
    PiecewiseQuadratic,
    QuadraticObjective,
    grad,
    sample_function,
    sector_alpha,
    value,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmSpec",
    "BREAKPOINTS",
    "ContourSingularityError",
    "DegenerateFamilyError",
    "DivergenceError",
    "DomainError",
    "EstimationError",
    "ExperimentConfig",
    "FunctionBatch",
    "IntervalPolynomial",
    "MarginalStabilityError",
    "NyquistCurve",
    "PiecewiseQuadratic",
    "Polynomial",
    "PreconditionError",
    "QuadraticObjective",
    "RateEstimate",
    "RootFindingError",
    "RootSet",
    "RunRecord",
    "SamplingError",
    "SimConfig",
    "SweepSummary",
    "TerminationReason",
    "Trajectory",
    "TransferFunction",
    "VectorField",
    "aggregate",
    "cancel_common_factor",
    "char_poly",
    "charpoly_interval",
    "circle_criterion",
    "default_omega_grid",
    "emit_plot_data",
    "estimate_rate",
    "eval_field",
    "fast_kth",
    "find_roots",
    "from_roots",
    "function_seed",
    "grad",
    "gradient_flow",
    "heavy_ball",
    "ic_seed",
    "is_hurwitz",
    "kharitonov_polys",
    "linearized_matrix",
    "make_function",
    "make_initial_state",
    "nyquist_curve",
    "nyquist_stable",
    "resolve_algorithm",
    "rk4_stability_check",
    "rk4_step",
    "root_product",
    "run_sweep",
    "sample_function",
    "sector_alpha",
    "simulate",
    "subseed",
    "trajectory_to_csv",
    "transfer_function",
    "value",
    "winding_number",
    "worst_rate",
]
