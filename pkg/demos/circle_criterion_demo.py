"""
Absolute stability over a curvature sector
==========================================

When the objective's curvature varies with position inside a sector
[alpha_s, 1], a single-point root check no longer applies.  The disk
test still gives a certificate: depending on how alpha_s compares to
the central curvature 1/kappa, the response curve must avoid a disk,
stay right of a vertical line, or stay inside a disk.

For the third-order family at kappa = 4 all three cases certify, so
convergence is guaranteed for every admissible nonlinear objective,
not just quadratics.
"""

import os

import numpy as np

from ctgrad import circle_criterion, fast_kth, nyquist_curve, transfer_function

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

kappa = 4.0
spec = fast_kth(3, kappa)

for alpha_s in (0.55, 0.25, 0.01):
    ok, case = circle_criterion(spec, kappa, alpha_s)
    print(f"alpha_s = {alpha_s:<5}: case = {case:<6} ok = {ok}")

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

# the response curve (gain 1) together with the test geometry per case
tf = transfer_function(spec, kappa)
curve = nyquist_curve(tf, gain=1.0)
x_line = -1.0 / (1.0 - 1.0 / kappa)

fig, axes = plt.subplots(1, 3, figsize=(12, 4))
for ax, alpha_s in zip(axes, (0.55, 0.25, 0.01)):
    ok, case = circle_criterion(spec, kappa, alpha_s)
    ax.plot(curve.points.real, curve.points.imag, "tab:blue", lw=1)
    d = alpha_s - 1.0 / kappa
    if case == "equal":
        ax.axvline(x_line, color="tab:red", lw=1)
    else:
        a = -1.0 / d
        center, radius = 0.5 * (a + x_line), 0.5 * abs(a - x_line)
        th = np.linspace(0, 2 * np.pi, 200)
        ax.plot(center + radius * np.cos(th), radius * np.sin(th),
                "tab:red", lw=1)
    ax.set_title(f"alpha_s = {alpha_s} ({case}, ok = {ok})")
    ax.set_aspect("equal")
    ax.set_xlim(-2.5, 4.5)
    ax.set_ylim(-3.0, 3.0)
fig.tight_layout()
fig.savefig(os.path.join(OUT, "circle_criterion.png"), dpi=120)
print(f"wrote {os.path.join(OUT, 'circle_criterion.png')}")
