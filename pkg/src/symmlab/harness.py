"""Trajectory runner, multi-trial aggregation, axiom suite and Monte Carlo probes."""

from __future__ import annotations

import csv
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import IoFailure
from .geometry import (
    Annulus,
    Disk,
    HalfDisk,
    Rect,
    Union,
    Grid,
    RasterSet,
    ShapeSpec,
    asymmetry,
    make_grid,
    measure,
    rasterize,
    rearrange_star,
    save_pbm,
    symm_diff_measure,
)
from .markov import KernelSpec, RngStream, build_kernel
from .symmetrize import AxisParam, SharpParam, SteinerParam, SymmParam, apply

__all__ = [
    "ExperimentConfig",
    "TrajectoryRecord",
    "TrialSummary",
    "AxiomReport",
    "iter_trajectory",
    "run_trajectory",
    "run_trials",
    "check_axioms",
    "discrimination_probe",
    "default_corpus",
    "worker_count",
    "TRACE_HEADER",
    "SUMMARY_HEADER",
]

TRACE_HEADER = ["trial", "step", "family", "p1", "p2", "boundary", "measure", "d1", "asymmetry", "asym_drop"]
SUMMARY_HEADER = ["step", "d1_median", "d1_q10", "d1_q90", "J_median"]

# Tolerance multipliers, in units of the grid spacing h (area ~ h * length).
STAR_TOL = 16
CHANGE_TOL = 32


@dataclass(frozen=True)
class ExperimentConfig:
    shape: ShapeSpec
    kernel: KernelSpec
    steps: int
    trials: int = 1
    seed: int = 0
    half_width: float = 2.0
    resolution: int = 512
    out_dir: str | None = None
    frame_every: int | None = None

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.frame_every is not None and self.frame_every < 1:
            raise ValueError(f"frame_every must be >= 1, got {self.frame_every}")

    @property
    def grid(self) -> Grid:
        return make_grid(self.half_width, self.resolution)


@dataclass(frozen=True)
class TrajectoryRecord:
    step: int
    param: SymmParam | None
    boundary: bool
    d1_to_star: float
    asymmetry: float
    asym_drop: float
    measure: float

    @property
    def family(self) -> str:
        return "none" if self.param is None else self.param.family


def iter_trajectory(cfg: ExperimentConfig, trial: int) -> Iterator[tuple[TrajectoryRecord, RasterSet]]:
    """Yield ``(record, set)`` for steps ``0..cfg.steps``; step 0 is the initial set."""
    grid = cfg.grid
    kernel = build_kernel(cfg.kernel)
    x = rasterize(grid, cfg.shape)
    star = rearrange_star(x)  # popcount never changes, so neither does the target
    area = measure(x)
    j = asymmetry(x)
    yield TrajectoryRecord(0, None, False, symm_diff_measure(x, star), j, 0.0, area), x

    stream = RngStream(cfg.seed, trial)
    state = None
    for n in range(1, cfg.steps + 1):
        rng = stream.at(n)
        state = kernel.initial(rng) if state is None else kernel.step(state, rng)
        param = kernel.emit(state)
        x = apply(x, param)
        j_next = asymmetry(x)
        rec = TrajectoryRecord(
            n,
            param,
            kernel.is_boundary(state),
            symm_diff_measure(x, star),
            j_next,
            j - j_next,
            measure(x),
        )
        j = j_next
        yield rec, x


def run_trajectory(
    cfg: ExperimentConfig,
    trial: int,
    on_frame: Callable[[int, RasterSet], None] | None = None,
) -> list[TrajectoryRecord]:
    records = []
    for rec, x in iter_trajectory(cfg, trial):
        records.append(rec)
        if on_frame is not None and cfg.frame_every and rec.step % cfg.frame_every == 0:
            on_frame(rec.step, x)
    return records


@dataclass
class TrialSummary:
    steps: np.ndarray
    d1_median: np.ndarray
    d1_q10: np.ndarray
    d1_q90: np.ndarray
    J_median: np.ndarray
    records: list[list[TrajectoryRecord]] = field(repr=False)

    @property
    def d1(self) -> np.ndarray:
        """``(trials, steps + 1)`` array of distances to the rearrangement."""
        return np.array([[r.d1_to_star for r in rs] for rs in self.records])

    @property
    def J(self) -> np.ndarray:
        return np.array([[r.asymmetry for r in rs] for rs in self.records])


def worker_count(requested: int | None = None) -> int:
    """Number of worker threads: ``requested`` or the CPU count, capped by ``SYMMLAB_THREADS``."""
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("SYMMLAB_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def run_trials(
    cfg: ExperimentConfig,
    out_dir: str | os.PathLike | None = None,
    threads: int | None = None,
) -> TrialSummary:
    """Run all trials and reduce them per step, in trial order.

    With an output directory (argument or ``cfg.out_dir``) writes
    ``trace.csv`` and ``summary.csv`` and, if ``cfg.frame_every`` is set,
    PBM frames ``trial<t>_step<n>.pbm``.
    """
    out = Path(out_dir) if out_dir is not None else (Path(cfg.out_dir) if cfg.out_dir else None)
    if out is not None:
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoFailure(str(exc)) from exc

    def one(trial):
        frames = []
        on_frame = None
        if out is not None and cfg.frame_every:
            on_frame = lambda step, x: frames.append((step, x))  # noqa: E731
        return run_trajectory(cfg, trial, on_frame), frames

    with ThreadPoolExecutor(max_workers=worker_count(threads)) as pool:
        results = list(pool.map(one, range(cfg.trials)))

    records = [r for r, _ in results]
    d1 = np.array([[r.d1_to_star for r in rs] for rs in records])
    J = np.array([[r.asymmetry for r in rs] for rs in records])
    summary = TrialSummary(
        steps=np.arange(cfg.steps + 1),
        d1_median=np.median(d1, axis=0),
        d1_q10=np.quantile(d1, 0.1, axis=0),
        d1_q90=np.quantile(d1, 0.9, axis=0),
        J_median=np.median(J, axis=0),
        records=records,
    )
    if out is not None:
        write_trace_csv(records, out / "trace.csv")
        write_summary_csv(summary, out / "summary.csv")
        for trial, (_, frames) in enumerate(results):
            for step, x in frames:
                save_pbm(x, out / f"trial{trial}_step{step}.pbm")
    return summary


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def trace_rows(records: Sequence[Sequence[TrajectoryRecord]]) -> Iterator[list[str]]:
    for trial, recs in enumerate(records):
        for r in recs:
            vals = r.param.values if r.param is not None else ()
            p1 = _fmt(vals[0]) if len(vals) > 0 else ""
            p2 = _fmt(vals[1]) if len(vals) > 1 else ""
            yield [
                str(trial),
                str(r.step),
                r.family,
                p1,
                p2,
                "1" if r.boundary else "0",
                _fmt(r.measure),
                _fmt(r.d1_to_star),
                _fmt(r.asymmetry),
                _fmt(r.asym_drop),
            ]


def _write_csv(path: Path, header, rows) -> None:
    try:
        with open(path, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def write_trace_csv(records, path) -> None:
    _write_csv(Path(path), TRACE_HEADER, trace_rows(records))


def write_summary_csv(summary: TrialSummary, path) -> None:
    rows = (
        [str(int(s)), _fmt(a), _fmt(b), _fmt(c), _fmt(d)]
        for s, a, b, c, d in zip(
            summary.steps, summary.d1_median, summary.d1_q10, summary.d1_q90, summary.J_median
        )
    )
    _write_csv(Path(path), SUMMARY_HEADER, rows)


# ---------------------------------------------------------------------------
# Axiom suite


@dataclass
class AxiomReport:
    checks: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def expect(self, cond: bool, message: str) -> None:
        self.checks += 1
        if not cond:
            self.violations.append(message)


def default_corpus() -> list[ShapeSpec]:
    """Disk, square, annulus, half-disk, two-disk union and L-shape."""
    return [
        Disk((0.3, -0.2), 0.7),
        Rect((0.0, 0.0), (1.0, 1.0)),
        Annulus((0.0, 0.0), 0.5, 1.0),
        HalfDisk(1.0, 1),
        Union((Disk((-0.6, 0.0), 0.4), Disk((0.7, 0.3), 0.3))),
        Union((Rect((-0.5, -0.5), (0.5, 0.0)), Rect((-0.5, 0.0), (0.0, 0.5)))),
    ]


def random_params(rng: np.random.Generator, samples: int) -> dict[str, list[SymmParam]]:
    out: dict[str, list[SymmParam]] = {"steiner": [], "polar": [], "cap": [], "sharp": []}
    for _ in range(samples):
        out["steiner"].append(SteinerParam(rng.uniform(0, math.pi)))
        out["polar"].append(AxisParam(rng.uniform(0, 2 * math.pi), abs(rng.normal(0, 0.75)), "polar"))
        out["cap"].append(AxisParam(rng.uniform(0, 2 * math.pi), abs(rng.normal(0, 0.75)), "cap"))
        out["sharp"].append(SharpParam(1 if rng.random() < 0.5 else -1, abs(rng.normal(0, 0.75))))
    return out


def check_axioms(
    grid: Grid,
    shapes: Sequence[ShapeSpec] | None = None,
    samples: int = 20,
    seed: int = 0,
) -> AxiomReport:
    """Check the symmetrization-space axioms on a shape corpus.

    For each operator family and each of ``samples`` random parameters:
    bit-exact idempotence, exact popcount preservation, exact nonexpansiveness
    over all pairs of the corpus, star-compatibility (exact for ``star(X^s)``,
    within ``16h`` for ``star(X)^s``) and asymmetry monotonicity within
    ``16h L``.  The spherical rearrangement itself is checked exactly.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    shapes = list(default_corpus() if shapes is None else shapes)
    report = AxiomReport()
    h, L = grid.spacing, grid.half_width
    star_tol = STAR_TOL * h
    j_slack = STAR_TOL * h * L

    sets = [rasterize(grid, s) for s in shapes]
    stars = [rearrange_star(x) for x in sets]
    js = [asymmetry(x) for x in sets]
    pairs = list(itertools.combinations_with_replacement(range(len(sets)), 2))
    d_in = {(a, b): symm_diff_measure(sets[a], sets[b]) for a, b in pairs}

    for k, (x, st) in enumerate(zip(sets, stars)):
        tag = f"star/shape{k}"
        report.expect(rearrange_star(st) == st, f"{tag}: not idempotent")
        report.expect(st.popcount == x.popcount, f"{tag}: popcount changed")
        report.expect(asymmetry(st) <= js[k], f"{tag}: J increased")
    for a, b in pairs:
        report.expect(
            symm_diff_measure(stars[a], stars[b]) <= d_in[a, b],
            f"star/shapes{a},{b}: expansive",
        )

    rng = np.random.default_rng(seed)
    for family, params in random_params(rng, samples).items():
        for p in params:
            outs = [apply(x, p) for x in sets]
            for k, (x, y) in enumerate(zip(sets, outs)):
                tag = f"{family}/shape{k}/{p}"
                report.expect(apply(y, p) == y, f"{tag}: not idempotent")
                report.expect(y.popcount == x.popcount, f"{tag}: popcount {x.popcount} -> {y.popcount}")
                report.expect(rearrange_star(y) == stars[k], f"{tag}: star(X^s) != star(X)")
                d = symm_diff_measure(apply(stars[k], p), stars[k])
                report.expect(d <= star_tol, f"{tag}: d1(star(X)^s, star(X)) = {d:.4g} > {star_tol:.4g}")
                report.expect(asymmetry(y) <= js[k] + j_slack, f"{tag}: J increased beyond slack")
            for a, b in pairs:
                d_out = symm_diff_measure(outs[a], outs[b])
                report.expect(d_out <= d_in[a, b], f"{family}/shapes{a},{b}/{p}: expansive")
    return report


# ---------------------------------------------------------------------------
# Discrimination probe


def discrimination_probe(cfg: ExperimentConfig, target: RasterSet, horizon: int, paths: int) -> float:
    """Fraction of simulated paths that move ``target`` before touching the boundary.

    Path ``p`` follows the kernel of ``cfg`` with stream ``(cfg.seed, p)``.  It
    counts as a hit if, within ``horizon`` emissions and before any boundary
    emission, it emits a parameter ``s`` with ``d1(target^s, target) > 32h``.
    """
    if horizon < 1 or paths < 1:
        raise ValueError("horizon and paths must be >= 1")
    kernel = build_kernel(cfg.kernel)
    threshold = CHANGE_TOL * target.grid.spacing
    hits = 0
    for p in range(paths):
        stream = RngStream(cfg.seed, p)
        state = None
        for n in range(1, horizon + 1):
            rng = stream.at(n)
            state = kernel.initial(rng) if state is None else kernel.step(state, rng)
            if kernel.is_boundary(state):
                break
            if symm_diff_measure(apply(target, kernel.emit(state)), target) > threshold:
                hits += 1
                break
    return hits / paths
