"""Which limit law do the window integrals actually approach?

Runs the discrimination study on the default desk-scale grid: sup-distance
between the exact window CF and each candidate limit CF on a z-grid, at a
growing sequence of window sizes. The boundary_augmented candidate is the
one the finite-T law converges to; the claimed one stalls at a constant
offset because it keeps only one of the two boundary layers.
"""

import numpy as np

from idma import kernels, levy, verify

rep = verify.cf_convergence(
    kernels.signed_ou(), levy.two_point(1.0),
    ls=[0.0], T_grid=[5.0, 10.0, 20.0, 40.0],
    z_grid=np.arange(-5.0, 5.01, 0.25))

print("=== Convergence of the window CF, signed_ou + two_point(1) ===")
print(f"{'T':>6}   {'dist to claimed':>16}   {'dist to boundary':>17}")
for T, dc, db in zip(rep.T_grid, rep.dist_claimed, rep.dist_boundary):
    print(f"{T:6.1f}   {dc:16.6e}   {db:17.6e}")

print(f"\nwinner: {rep.winner}")
print(f"monotone decrease (last three T): claimed {rep.monotone_claimed}, "
      f"boundary {rep.monotone_boundary}")
print(f"threshold for a win at the largest T: {rep.threshold:.0e}")

print("""
Reading the table: the boundary_augmented distances fall roughly like
e^{-T} toward zero while the claimed distances flatten near 0.25. The
factor-of-two in the log-CF (both window edges carry an independent copy
of the same boundary functional) is exactly what the claimed candidate
misses.""")
