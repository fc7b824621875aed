"""
Characteristic roots and worst-case decay rates
===============================================

The linearized dynamics of each algorithm are governed by a degree-k
polynomial whose roots depend on the local curvature lambda_f.  This
script walks the curvature range for three algorithms at kappa = 16,
prints where the dominant root sits, and then sweeps kappa to show the
worst-case rate scaling: 1/kappa for plain gradient flow, kappa^-0.5
for heavy ball, kappa^-1/3 for the third-order family.
"""

import os

import numpy as np

from ctgrad import char_poly, fast_kth, find_roots, gradient_flow, heavy_ball, worst_rate

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

kappa = 16.0
algorithms = [gradient_flow(), heavy_ball(kappa), fast_kth(3, kappa)]

print(f"dominant root real part across the curvature range, kappa = {kappa}")
print(f"{'lambda_f':>10} " + " ".join(f"{a.label:>14}" for a in algorithms))
for lam in np.linspace(1.0 / kappa, 1.0, 7):
    row = [find_roots(char_poly(a, float(lam))).max_real for a in algorithms]
    print(f"{lam:10.4f} " + " ".join(f"{v:14.6f}" for v in row))

# the worst-case rate is the slowest decay over the whole curvature range
print("\nworst-case rate vs condition number")
kappas = np.array([2.0, 4.0, 16.0, 64.0, 256.0, 1024.0])
rates = {}
for name, make in [("gradient_flow", lambda kap: gradient_flow()),
                   ("heavy_ball", heavy_ball),
                   ("fast_kth:3", lambda kap: fast_kth(3, kap))]:
    rates[name] = [worst_rate(make(kap), kap) for kap in kappas]

print(f"{'kappa':>8} {'gradient_flow':>14} {'heavy_ball':>12} {'fast_kth:3':>12}")
for i, kap in enumerate(kappas):
    print(f"{kap:8.0f} {rates['gradient_flow'][i]:14.6f} "
          f"{rates['heavy_ball'][i]:12.6f} {rates['fast_kth:3'][i]:12.6f}")

print("\nreference: 1/kappa, kappa^-0.5, kappa^-1/3")
for i, kap in enumerate(kappas):
    print(f"{kap:8.0f} {1 / kap:14.6f} {kap ** -0.5:12.6f} {kap ** (-1 / 3):12.6f}")

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(6, 4))
for name, style in [("gradient_flow", "o-"), ("heavy_ball", "s-"), ("fast_kth:3", "^-")]:
    ax.loglog(kappas, rates[name], style, label=name)
ax.loglog(kappas, kappas ** -0.5, "k:", lw=1, label="kappa^-1/2")
ax.loglog(kappas, kappas ** (-1 / 3), "k--", lw=1, label="kappa^-1/3")
ax.set_xlabel("condition number kappa")
ax.set_ylabel("worst-case rate")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "worst_rates.png"), dpi=120)
print(f"\nwrote {os.path.join(OUT, 'worst_rates.png')}")
