"""Random polarizations round a square into a disk.

Run: python3 walkthroughs/02_convergence.py

Drives 10 trials of i.i.d. polarizations (uniform axis, half-normal offset)
from the unit square and prints the median distance to the centered disk,
relative to the area, every 50 steps.  Then compares the walk kernels.
"""

from symmlab import Rect, run_trials
from symmlab import markov as m
from symmlab.harness import ExperimentConfig

square = Rect((0.0, 0.0), (1.0, 1.0))
cfg = ExperimentConfig(square, m.IidPolar(1.0), 500, trials=10, resolution=256)
s = run_trials(cfg)
area = s.records[0][0].measure

print("i.i.d. polarizations, 10 trials")
print(f"{'step':>5s} {'median d1/area':>15s} {'q10':>8s} {'q90':>8s} {'J median':>9s}")
for k in range(0, cfg.steps + 1, 50):
    print(f"{k:5d} {s.d1_median[k] / area:15.4f} {s.d1_q10[k] / area:8.4f} {s.d1_q90[k] / area:8.4f} {s.J_median[k]:9.4f}")

print("\nwalk kernels, 5 trials x 1000 steps, final median d1/area")
for spec in (
    m.MultWalkCap(0.1, "cap"),
    m.MultWalkCap(0.1, "polar"),
    m.ReflectedWalkCap(kind="cap"),
    m.ReflectedWalkCap(kind="polar"),
    m.ProjBallWalk(0.3),
):
    s = run_trials(ExperimentConfig(square, spec, 1000, trials=5, resolution=256))
    print(f"  {spec!r:70s} {s.d1_median[-1] / area:.4f}")
