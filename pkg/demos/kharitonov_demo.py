"""Robust stability of a whole curvature range from four polynomials.

As the curvature lambda_f sweeps its range, each characteristic
coefficient moves inside an interval.  Checking the four vertex
polynomials of that interval family certifies every member at once,
which is much stronger than sampling.  Here we compare the vertex
verdict against a dense sample for heavy ball and the third-order
family at a few condition numbers.
"""

from ctgrad import (
    char_poly,
    charpoly_interval,
    fast_kth,
    heavy_ball,
    is_hurwitz,
    kharitonov_polys,
)

import numpy as np

for make, name in [(heavy_ball, "heavy_ball"), (lambda kap: fast_kth(3, kap), "fast_kth:3")]:
    print(f"\n{name}")
    for kappa in (4.0, 64.0, 1024.0):
        spec = make(kappa)
        ip = charpoly_interval(spec, 1.0 / kappa, 1.0)
        verts = kharitonov_polys(ip)
        robust = all(is_hurwitz(p) for p in verts)

        sampled = all(is_hurwitz(char_poly(spec, float(lam)))
                      for lam in np.linspace(1.0 / kappa, 1.0, 200))
        print(f"  kappa = {kappa:6.0f}: vertex check {'stable' if robust else 'not conclusive'},"
              f" dense sample {'stable' if sampled else 'unstable'}")

# the vertex check is conservative: the four vertices treat every
# coefficient as free, while the family moves them together.  For these
# dynamics the coefficients are affine in a single parameter, so a vertex
# can be unstable even though every family member is stable.
print("""
note: a 'not conclusive' vertex verdict with a stable dense sample is
expected for strongly coupled families; the converse direction (vertices
stable implies family stable) is the guaranteed one.""")
