"""Command line: ``symmlab run | check | demo``.

Exit codes: 0 success, 1 configuration or I/O error, 2 usage error,
3 axiom violations.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace

from .config import load_config
from .demos import DEMOS
from .errors import ConfigError, IoFailure
from .geometry import make_grid
from .harness import check_axioms, default_corpus, run_trials

EXIT_OK, EXIT_CONFIG, EXIT_USAGE, EXIT_AXIOMS = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symmlab", description="Random symmetrization experiments on raster sets.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the experiment described by a JSON config")
    run.add_argument("--config", required=True)
    run.add_argument("--out", help="output directory (overrides output.dir)")
    run.add_argument("--frames", type=int, help="write a PBM frame every K steps")

    check = sub.add_parser("check", help="run the axiom suite on the built-in shape corpus")
    check.add_argument("--grid-n", type=int, default=256)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--samples", type=int, default=20)

    demo = sub.add_parser("demo", help="replay a built-in experiment")
    demo.add_argument("name", help=", ".join(DEMOS))
    demo.add_argument("--out")
    return p


def _run(args) -> int:
    cfg = load_config(args.config)
    if args.frames is not None:
        if args.frames < 1:
            print("error: --frames must be >= 1", file=sys.stderr)
            return EXIT_USAGE
        cfg = replace(cfg, frame_every=args.frames)
    out = args.out or cfg.out_dir or "."
    s = run_trials(cfg, out)
    area = s.records[0][0].measure
    print(f"{cfg.trials} trial(s) x {cfg.steps} steps -> {out}")
    print(f"d1/measure median: {s.d1_median[0] / area:.4f} -> {s.d1_median[-1] / area:.4f}")
    return EXIT_OK


def _check(args) -> int:
    t0 = time.perf_counter()
    report = check_axioms(make_grid(2.0, args.grid_n), default_corpus(), args.samples, args.seed)
    for v in report.violations:
        print(f"VIOLATION {v}")
    print(f"{report.checks} checks, {len(report.violations)} violations, {time.perf_counter() - t0:.1f}s")
    return EXIT_OK if report.ok else EXIT_AXIOMS


def _demo(args) -> int:
    if args.name not in DEMOS:
        print(f"error: unknown demo {args.name!r}; choose from {', '.join(DEMOS)}", file=sys.stderr)
        return EXIT_USAGE
    rep = DEMOS[args.name](args.out)
    print(f"[{rep.name}] {'as expected' if rep.passed else 'UNEXPECTED'}")
    for line in rep.lines:
        print(f"  {line}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "check":
            return _check(args)
        return _demo(args)
    except (ConfigError, IoFailure, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:  # e.g. an invalid --grid-n
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if args.command == "check" else EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
