"""symmlab: iterated random symmetrizations of planar raster sets."""

from .geometry import (
    Annulus,
    Difference,
    Disk,
    Grid,
    HalfDisk,
    RasterSet,
    Rect,
    Union,
    asymmetry,
    load_pbm,
    make_grid,
    measure,
    rasterize,
    rearrange_star,
    save_pbm,
    symm_diff_measure,
)
from .symmetrize import (
    AxisParam,
    SharpParam,
    SteinerParam,
    apply,
    cap_sharp,
    cap_symmetrize,
    polarize,
    steiner,
)
from .markov import RngStream, build_kernel
from .harness import (
    ExperimentConfig,
    check_axioms,
    discrimination_probe,
    run_trajectory,
    run_trials,
)

__version__ = "0.1.0"

__all__ = [
    "Annulus",
    "Difference",
    "Disk",
    "Grid",
    "HalfDisk",
    "RasterSet",
    "Rect",
    "Union",
    "asymmetry",
    "load_pbm",
    "make_grid",
    "measure",
    "rasterize",
    "rearrange_star",
    "save_pbm",
    "symm_diff_measure",
    "AxisParam",
    "SharpParam",
    "SteinerParam",
    "apply",
    "cap_sharp",
    "cap_symmetrize",
    "polarize",
    "steiner",
    "RngStream",
    "build_kernel",
    "ExperimentConfig",
    "check_axioms",
    "discrimination_probe",
    "run_trajectory",
    "run_trials",
]
