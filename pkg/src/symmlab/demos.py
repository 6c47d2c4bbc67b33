"""Built-in experiments replayed by ``symmlab demo <name>``.

Each demo runs a fixed configuration, on the ``n = 256`` grid unless noted,
optionally writes the usual CSV outputs, and returns a short report with a
verdict on the behavior it illustrates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import markov
from .geometry import Annulus, Disk, HalfDisk, Rect, rasterize, symm_diff_measure
from .harness import ExperimentConfig, TrialSummary, iter_trajectory, run_trials
from .symmetrize import apply

SQUARE = Rect((0.0, 0.0), (1.0, 1.0))
UPPER_HALF_DISK = HalfDisk(1.0, 1)
ANNULUS = Annulus((0.0, 0.0), 0.5, 1.0)
CONVERGED = 0.05


@dataclass
class DemoReport:
    name: str
    config: ExperimentConfig
    summary: TrialSummary
    lines: list[str] = field(default_factory=list)
    passed: bool = True


def _cfg(shape, kernel, steps, trials=1, resolution=256) -> ExperimentConfig:
    return ExperimentConfig(shape, kernel, steps, trials=trials, resolution=resolution)


def _convergence(name, cfg, out_dir) -> DemoReport:
    s = run_trials(cfg, out_dir)
    area = s.records[0][0].measure
    ratio = s.d1_median[-1] / area
    rep = DemoReport(name, cfg, s, passed=bool(ratio < CONVERGED))
    rep.lines.append(f"initial d1/measure {s.d1_median[0] / area:.4f}, final median {ratio:.4f}")
    rep.lines.append(f"J median {s.J_median[0]:.6f} -> {s.J_median[-1]:.6f}")
    return rep


def kronecker(out_dir=None):
    cfg = _cfg(Disk((1.0, 0.0), 0.8), markov.Kronecker(), 2000)
    return _convergence("kronecker", cfg, out_dir)


def proj_walk(out_dir=None):
    return _convergence("proj-walk", _cfg(SQUARE, markov.ProjBallWalk(0.3), 1000, trials=5), out_dir)


def mult_walk_cap(out_dir=None):
    return _convergence("mult-walk-cap", _cfg(SQUARE, markov.MultWalkCap(0.1, "cap"), 1000, trials=5), out_dir)


def reflected_walk_polar(out_dir=None):
    cfg = _cfg(SQUARE, markov.ReflectedWalkCap(kind="polar"), 1000, trials=5)
    return _convergence("reflected-walk-polar", cfg, out_dir)


def sharp_product(out_dir=None):
    # Half the steps are caps about the origin, which reshuffle the partial
    # outer ring of cells: a floor near 2h/R, too close to 0.05 at n = 256.
    cfg = _cfg(UPPER_HALF_DISK, markov.SharpProduct(), 1000, trials=5, resolution=512)
    return _convergence("sharp-product", cfg, out_dir)


def sharp_failing(out_dir=None):
    cfg = _cfg(UPPER_HALF_DISK, markov.SharpFailing(1.0), 200, trials=5)
    s = run_trials(cfg, out_dir)
    first, last = s.d1_median[0], s.d1_median[-1]
    rep = DemoReport("sharp-failing", cfg, s, passed=bool(last > 0.5 * first))
    rep.lines.append(f"d1 median {first:.4f} -> {last:.4f} (no convergence iff final > {0.5 * first:.4f})")
    rep.lines.append(f"min over trials and steps {s.d1.min():.4f}")
    return rep


def annulus_fixed(out_dir=None):
    """Polarizations whose half-plane contains the annulus leave it untouched."""
    cfg = _cfg(ANNULUS, markov.IidPolar(1.0), 200)
    s = run_trials(cfg, out_dir)
    prev, moved_far = None, 0
    far_steps = 0
    for rec, x in iter_trajectory(cfg, 0):
        if prev is not None and rec.param.r >= ANNULUS.r_out:
            far_steps += 1
            moved_far += symm_diff_measure(prev, x) > 0
        prev = x
    rep = DemoReport("annulus-fixed", cfg, s, passed=moved_far == 0)
    rep.lines.append(f"{far_steps} steps with r >= r_out, {moved_far} of them changed the set")
    # the pure annulus against every emitted parameter, not just the trajectory
    target = rasterize(cfg.grid, ANNULUS)
    rs = [rec.param.r for rec in s.records[0][1:]]
    fixed = sum(symm_diff_measure(target, x) == 0 for x in _polarized(target, s))
    rep.lines.append(f"annulus fixed by {fixed}/{len(rs)} emitted polarizations (r range {min(rs):.3f}..{max(rs):.3f})")
    return rep


def _polarized(target, summary):
    for rec in summary.records[0][1:]:
        yield apply(target, rec.param)


def continuity_failure(out_dir=None):
    cfg = _cfg(SQUARE, markov.EnumeratedDense(0), 1000)
    rep = _convergence("continuity-failure", cfg, out_dir)
    kernel = markov.build_kernel(cfg.kernel)
    firsts = [kernel.direction(k) for k in range(1, 9)]
    rep.lines.append("directions " + ", ".join(f"{t:.3f}" for t in firsts) + ", ...")
    rep.lines.append("deterministic, discontinuous transition; finite runs are informational only")
    rep.passed = True
    return rep


DEMOS: dict[str, Callable[..., DemoReport]] = {
    "kronecker": kronecker,
    "proj-walk": proj_walk,
    "mult-walk-cap": mult_walk_cap,
    "reflected-walk-polar": reflected_walk_polar,
    "sharp-product": sharp_product,
    "sharp-failing": sharp_failing,
    "annulus-fixed": annulus_fixed,
    "continuity-failure": continuity_failure,
}
