"""
Reduced benchmark sweep
=======================

A smaller version of the default experiment: 4 condition numbers, two
algorithms, 5 random functions x 5 random starts per cell.  Writes the
three CSV outputs (per-run records, per-cell aggregates, reference
rates) and plots mean fitted rate against the theory curves.

The full-size default (10 x 10 per cell) is the `ctgrad sweep` CLI
default and takes a few minutes; this one runs in well under a minute.
"""

import os

import numpy as np

from ctgrad import ExperimentConfig, emit_plot_data, run_sweep

OUT = os.path.join(os.path.dirname(__file__), "output", "sweep")

cfg = ExperimentConfig(kappas=(4.0, 16.0, 64.0, 256.0),
                       algorithms=("heavy_ball", "fast_kth:3"),
                       n_functions=5, n_initial_conditions=5, seed=1)
runs, summaries = run_sweep(cfg)
paths = emit_plot_data(runs, summaries, OUT)
print(f"{len(runs)} runs, {len(summaries)} summary rows")
for key, path in paths.items():
    print(f"{key}: {path}")

print(f"\n{'kappa':>6} {'algorithm':>12} {'mean_rho':>9} {'std_rho':>8} {'mean_c':>7}")
for s in summaries:
    print(f"{s.kappa:6.0f} {s.algorithm:>12} {s.mean_rho:9.4f} "
          f"{s.std_rho:8.4f} {s.mean_c:7.2f}")

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

kappas = np.array(sorted({s.kappa for s in summaries}))
fig, ax = plt.subplots(figsize=(6, 4))
for name, marker in [("heavy_ball", "s"), ("fast_kth:3", "^")]:
    rows = sorted((s.kappa, s.mean_rho, s.std_rho)
                  for s in summaries if s.algorithm == name)
    ax.errorbar([r[0] for r in rows], [r[1] for r in rows],
                yerr=[r[2] for r in rows], marker=marker, label=name)
ax.plot(kappas, kappas ** -0.5, "k:", lw=1, label="kappa^-1/2")
ax.plot(kappas, kappas ** (-1 / 3), "k--", lw=1, label="kappa^-1/3")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("condition number kappa")
ax.set_ylabel("mean fitted rate")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "scaling.png"), dpi=120)
print(f"\nwrote {os.path.join(OUT, 'scaling.png')}")
