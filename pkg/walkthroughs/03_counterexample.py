"""A chain that visits every symmetrization yet never symmetrizes.

Run: python3 walkthroughs/03_counterexample.py

The truncated cap space glues two half-lines at r = 0: (+1, r) acts as the
cap about r e, while every (-1, r) acts as the cap about -e at the origin.
Starting from the upper half-disk D+, the (-1, .) side fixes D+ and the
(+1, 0) point flips it to the lower half-disk D-.  The failing kernel may only
change spin through r = 0, so the set just bounces between D+ and D-.
"""

from symmlab import HalfDisk, make_grid, rasterize, symm_diff_measure
from symmlab import markov as m
from symmlab.harness import ExperimentConfig, discrimination_probe, iter_trajectory

grid = make_grid(2.0, 256)
up, down = rasterize(grid, HalfDisk(1.0, 1)), rasterize(grid, HalfDisk(1.0, -1))

cfg = ExperimentConfig(HalfDisk(1.0, 1), m.SharpFailing(1.0), 200, resolution=256)
visits = {"near D+": 0, "near D-": 0}
worst = 0.0
for rec, x in iter_trajectory(cfg, 0):
    d_up, d_down = symm_diff_measure(x, up), symm_diff_measure(x, down)
    visits["near D+" if d_up <= d_down else "near D-"] += 1
    worst = max(worst, min(d_up, d_down))
    if rec.step in (0, 1, 2, 3, 50, 200):
        print(f"step {rec.step:3d}  param {rec.param}  d1 to star {rec.d1_to_star:.4f}")
print(f"\nsteps spent next to each half-disk: {visits}")
print(f"largest d1 to the nearer one: {worst:.4f} ({worst / grid.spacing:.1f} h); raster rounding only")

print("\nprobe: share of 200 paths that move D+ before touching r = 0 (horizon 50)")
for spec in (m.SharpFailing(1.0), m.SharpProduct()):
    f = discrimination_probe(ExperimentConfig(HalfDisk(1.0, 1), spec, 50, resolution=256), up, 50, 200)
    print(f"  {type(spec).__name__:14s} {f:.3f}")

print(f"\nd1(D+, D-) = {symm_diff_measure(up, down):.4f}: the chain jumps between two far-apart sets.")
