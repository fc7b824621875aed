"""Why the integrator refuses large step sizes at large kappa.

A fixed-step explicit integrator is only stable while dt times every
characteristic root stays inside its stability region.  The fast
families push one root towards -kappa^((k-1)/k), so at large condition
numbers dt = 0.01 stops being safe: the simulation blows up even though
the continuous dynamics converge.  rk4_stability_check predicts this
before any integration happens.
"""

import numpy as np

from ctgrad import QuadraticObjective, fast_kth, rk4_stability_check, simulate

for kappa in (8.0, 1e4, 1e6):
    spec = fast_kth(3, kappa)
    ok, worst = rk4_stability_check(spec, kappa, 0.01)
    traj = simulate(spec, QuadraticObjective(1.0), [1.0, 0.0, 0.0])
    print(f"kappa = {kappa:>9.0f}: check {'passes' if ok else 'fails '} "
          f"(worst dt*s = {worst:.3g}), "
          f"simulation {traj.terminated_by.value} at t = {traj.t_end:.3g}")

# the growth factor along the negative real axis: |R(w)| crosses 1 near -2.79
print("\ngrowth factor magnitude |R(w)| on the real axis")
for w in (-0.5, -1.0, -2.0, -2.78, -2.80, -3.0):
    r = 1 + w + w**2 / 2 + w**3 / 6 + w**4 / 24
    print(f"  w = {w:6.2f}: |R| = {abs(r):.5f}")

# choosing dt from the check: halve until the worst root fits
kappa = 1e6
spec = fast_kth(3, kappa)
dt = 0.01
while not rk4_stability_check(spec, kappa, dt)[0]:
    dt /= 2
print(f"\nlargest tested safe dt for kappa = {kappa:.0f}: {dt}")
traj = simulate(spec, QuadraticObjective(1.0), np.array([1.0, 0.0, 0.0]))
print(f"(at the default dt the same run reports: {traj.terminated_by.value})")
