"""Decay-rate estimation from simulated trajectories."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import EstimationError

_MIN_FIT_SAMPLES = 10


@dataclass(frozen=True)
class RateEstimate:
    """Fitted exponential envelope |z(t)| <= c * |z(0)| * exp(-rho * t).

    rho_sim and ln_c_fit come from a least-squares line through
    ln(|z(t)| / |z(0)|) for t > t_fit_start; c_sim is the envelope constant
    measured over the whole trajectory, so the bound holds at every
    recorded sample.  rms_residual measures fit quality in log space.
    """

    rho_sim: float
    c_sim: float
    ln_c_fit: float
    rms_residual: float
    t_fit_start: float


@dataclass(frozen=True)
class SweepSummary:
    """Aggregate statistics of one (kappa, algorithm) cell of a sweep.

    n_divergent counts runs excluded from the aggregates; the per-run
    records keep their termination status.
    """

    kappa: float
    algorithm: str
    n_runs: int
    mean_rho: float
    std_rho: float
    mean_c: float
    std_c: float
    n_divergent: int = 0


def estimate_rate(traj, t_min: float = 10.0) -> RateEstimate:
    """Fit a decay exponent to the tail of a trajectory.

    Uses ordinary least squares on ln(|z(t)| / |z(0)|) against t over the
    samples with t > t_min.  When fewer than 10 samples lie beyond t_min
    the window falls back to t_min = t_end / 2 (visible in t_fit_start).
    Samples with |z| = 0 are excluded from the fit; |z(0)| must be nonzero.
    """
    times = np.asarray(traj.times, dtype=float)
    norms = np.asarray(traj.norms, dtype=float)
    z0 = norms[0]
    if not z0 > 0.0:
        raise EstimationError("initial state has zero norm")
    usable = norms > 0.0
    t_fit = float(t_min)
    mask = (times > t_fit) & usable
    if int(np.sum(mask)) < _MIN_FIT_SAMPLES:
        t_fit = float(times[-1]) / 2.0
        mask = (times > t_fit) & usable
        if int(np.sum(mask)) < _MIN_FIT_SAMPLES:
            raise EstimationError(
                f"only {int(np.sum(mask))} usable samples beyond t = {t_fit}"
            )
    t = times[mask]
    y = np.log(norms[mask] / z0)
    c0, c1 = npoly.polyfit(t, y, 1)
    rho = -float(c1)
    resid = y - (c0 + c1 * t)
    rms = float(np.sqrt(np.mean(resid * resid)))
    # envelope constant over every recorded sample, computed in log space
    # so late times cannot overflow exp
    lnr = np.log(norms[usable] / z0) + rho * times[usable]
    c_sim = float(np.exp(np.max(lnr)))
    return RateEstimate(rho_sim=rho, c_sim=c_sim, ln_c_fit=float(c0),
                        rms_residual=rms, t_fit_start=t_fit)


def aggregate(estimates, kappa: float, algorithm: str) -> SweepSummary:
    """Sample mean and standard deviation (n-1 denominator) of rho and c.

    A single estimate reports zero standard deviation.
    """
    estimates = list(estimates)
    if not estimates:
        raise ValueError("nothing to aggregate")
    rho = np.array([e.rho_sim for e in estimates])
    c = np.array([e.c_sim for e in estimates])
    n = len(estimates)
    std_rho = float(np.std(rho, ddof=1)) if n > 1 else 0.0
    std_c = float(np.std(c, ddof=1)) if n > 1 else 0.0
    return SweepSummary(kappa=float(kappa), algorithm=str(algorithm), n_runs=n,
                        mean_rho=float(np.mean(rho)), std_rho=std_rho,
                        mean_c=float(np.mean(c)), std_c=std_c)
