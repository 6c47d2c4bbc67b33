"""Polarizations whose half-plane contains an annulus leave it alone.

Run: python3 walkthroughs/04_annulus.py

Every polarization with offset r >= r_out keeps the annulus bit for bit, and
lines through the origin only move boundary cells.  Lines that cut the hole
are the only ones that push it toward the centered disk.
"""

import math

import numpy as np

from symmlab import Annulus, AxisParam, asymmetry, make_grid, polarize, rasterize, symm_diff_measure

grid = make_grid(2.0, 256)
ann = Annulus((0.0, 0.0), 0.5, 1.0)
a = rasterize(grid, ann)
print(f"annulus r_in={ann.r_in}, r_out={ann.r_out}, J = {asymmetry(a):.5f}\n")

print(f"{'r':>5s} {'moved (of 36 axes)':>20s} {'max d1 / h':>11s} {'min J':>8s}")
for r in (0.0, 0.25, 0.5, 0.75, 1.0, 1.25):
    ys = [polarize(a, AxisParam(phi, r, "polar")) for phi in np.linspace(0, 2 * math.pi, 36, endpoint=False)]
    d = [symm_diff_measure(y, a) for y in ys]
    print(f"{r:5.2f} {sum(v > 0 for v in d):20d} {max(d) / grid.spacing:11.2f} {min(asymmetry(y) for y in ys):8.5f}")
