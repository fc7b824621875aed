"""Integrate single trajectories and fit their decay exponents.

Runs heavy ball and the third-order family on one random piecewise
quadratic objective at kappa = 25, writes both trajectories as CSV and
compares the fitted rate against the worst-case prediction.
"""

import os

import numpy as np

from ctgrad import (
    estimate_rate,
    fast_kth,
    heavy_ball,
    sample_function,
    sector_alpha,
    simulate,
    trajectory_to_csv,
    worst_rate,
)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

kappa = 25.0
rng = np.random.default_rng(7)
f = sample_function(rng, 1.0 / kappa)
print(f"objective curvatures: {np.round(f.hessians, 3)}")
print(f"sector bound alpha_s = {sector_alpha(f):.4f}")

for spec in (heavy_ball(kappa), fast_kth(3, kappa)):
    z0 = np.zeros(spec.k)
    z0[0] = 4.0  # start at x = 4, derivatives at rest
    traj = simulate(spec, f, z0)
    est = estimate_rate(traj)
    path = os.path.join(OUT, f"traj_{spec.label.replace(':', '')}.csv")
    trajectory_to_csv(traj, path)
    print(f"\n{spec.label}")
    print(f"  terminated_by = {traj.terminated_by.value} at t = {traj.t_end:.2f}")
    print(f"  fitted rate rho_sim = {est.rho_sim:.4f} "
          f"(worst-case prediction {worst_rate(spec, kappa):.4f})")
    print(f"  envelope constant c_sim = {est.c_sim:.3f}")
    print(f"  wrote {path}")

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(6, 4))
for spec in (heavy_ball(kappa), fast_kth(3, kappa)):
    traj = simulate(spec, f, np.array([4.0] + [0.0] * (spec.k - 1)))
    ax.semilogy(traj.times, traj.norms, label=spec.label)
ax.set_xlabel("t")
ax.set_ylabel("|z(t)|")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "trajectories.png"), dpi=120)
print(f"\nwrote {os.path.join(OUT, 'trajectories.png')}")
