"""Raster model of planar sets of finite measure.

A :class:`Grid` discretizes the square window ``[-L, L]^2`` into ``n x n``
cells of side ``h = 2L/n``.  A :class:`RasterSet` is an occupancy bitmap over
a grid; a cell belongs to the set iff its center does.  Cell ``(i, j)`` has
center ``(-L + (i + 1/2) h, -L + (j + 1/2) h)`` and linear index ``j*n + i``,
so bitmaps are stored row-major with the row axis along ``y``.

The asymmetry functional ``J(X) = sum |c|^2 / (1 + |c|^2) h^2`` is accumulated
in fixed point: each cell weight is an integer multiple of a power-of-two
quantum, so ``J`` values, their differences and telescoping sums are exact in
double precision and inclusion/rearrangement monotonicity holds bit-exactly.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    GridMismatch,
    IoFailure,
    MalformedHeader,
    MalformedShape,
    NonPositiveWindow,
    OddOrTinyResolution,
)

__all__ = [
    "Grid",
    "RasterSet",
    "Disk",
    "Rect",
    "Annulus",
    "HalfDisk",
    "Union",
    "Difference",
    "ShapeSpec",
    "make_grid",
    "rasterize",
    "measure",
    "symm_diff_measure",
    "rearrange_star",
    "asymmetry",
    "save_pbm",
    "load_pbm",
]

MIN_RESOLUTION = 16


@dataclass(frozen=True)
class Grid:
    half_width: float
    resolution: int

    def __post_init__(self):
        if not self.half_width > 0 or not math.isfinite(self.half_width):
            raise NonPositiveWindow(f"half_width must be > 0, got {self.half_width}")
        if (
            int(self.resolution) != self.resolution
            or self.resolution < MIN_RESOLUTION
            or self.resolution % 2
        ):
            raise OddOrTinyResolution(
                f"resolution must be even and >= {MIN_RESOLUTION}, got {self.resolution}"
            )
        object.__setattr__(self, "half_width", float(self.half_width))
        object.__setattr__(self, "resolution", int(self.resolution))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.resolution

    @property
    def size(self) -> int:
        return self.resolution * self.resolution

    @property
    def cell_area(self) -> float:
        return self.spacing * self.spacing

    # Geometry tables are computed lazily and shared by every set on the grid.
    # Centers are built as (k - n/2 + 1/2) h so that they are exactly symmetric
    # about the origin.

    @cached_property
    def _axis(self) -> np.ndarray:
        n = self.resolution
        return (np.arange(n) - n / 2 + 0.5) * self.spacing

    @cached_property
    def x(self) -> np.ndarray:
        return _frozen(np.tile(self._axis, self.resolution))

    @cached_property
    def y(self) -> np.ndarray:
        return _frozen(np.repeat(self._axis, self.resolution))

    @cached_property
    def radius(self) -> np.ndarray:
        return _frozen(np.hypot(self.x, self.y))

    @cached_property
    def r2(self) -> np.ndarray:
        return _frozen(self.x * self.x + self.y * self.y)

    @cached_property
    def star_order(self) -> np.ndarray:
        """Cell indices sorted by (|c|^2, polar angle in [0, 2pi), index)."""
        angle = np.mod(np.arctan2(self.y, self.x), 2 * np.pi)
        return _frozen(np.lexsort((np.arange(self.size), angle, self.r2)))

    @cached_property
    def _sorted_radius(self) -> np.ndarray:
        return self.radius[self.star_order]

    def cells_within(self, radius: float) -> np.ndarray:
        """Ascending indices of the cells whose center satisfies ``|c| <= radius``."""
        k = int(np.searchsorted(self._sorted_radius, radius, side="right"))
        return np.sort(self.star_order[:k])

    @cached_property
    def asym_quantum(self) -> float:
        # Power of two with J_max = (2L)^2 < 2^53 quanta, so all partial sums
        # of cell weights are exact doubles.
        return 2.0 ** (math.ceil(math.log2(4 * self.half_width**2)) - 53)

    @cached_property
    def asym_weights(self) -> np.ndarray:
        """Per-cell asymmetry density times cell area, in integer quanta."""
        density = 1.0 - 1.0 / (1.0 + self.r2)  # monotone in r2 under rounding
        return _frozen(np.floor(density * self.cell_area / self.asym_quantum).astype(np.int64))

    def index(self, i: int, j: int) -> int:
        return j * self.resolution + i

    def center(self, i: int, j: int) -> tuple[float, float]:
        return float(self._axis[i]), float(self._axis[j])


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def make_grid(half_width: float, resolution: int) -> Grid:
    return Grid(half_width, resolution)


class RasterSet:
    """Immutable occupancy bitmap over a :class:`Grid`."""

    __slots__ = ("grid", "cells")

    def __init__(self, grid: Grid, cells: np.ndarray):
        cells = np.asarray(cells, dtype=bool).reshape(-1)
        if cells.size != grid.size:
            raise DimensionMismatch(f"bitmap has {cells.size} cells, grid needs {grid.size}")
        if cells.flags.writeable:
            cells = cells.copy()
            cells.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "cells", cells)

    def __setattr__(self, name, value):
        raise AttributeError("RasterSet is immutable")

    @classmethod
    def empty(cls, grid: Grid) -> "RasterSet":
        return cls(grid, np.zeros(grid.size, dtype=bool))

    @classmethod
    def full(cls, grid: Grid) -> "RasterSet":
        return cls(grid, np.ones(grid.size, dtype=bool))

    @classmethod
    def from_indices(cls, grid: Grid, idx) -> "RasterSet":
        cells = np.zeros(grid.size, dtype=bool)
        cells[np.asarray(idx, dtype=np.int64)] = True
        return cls(grid, cells)

    @property
    def popcount(self) -> int:
        return int(np.count_nonzero(self.cells))

    @property
    def image(self) -> np.ndarray:
        """``(n, n)`` view indexed ``[j, i]`` (row = y index)."""
        n = self.grid.resolution
        return self.cells.reshape(n, n)

    def max_radius(self) -> float:
        if not self.cells.any():
            return 0.0
        return float(self.grid.radius[self.cells].max())

    def _check(self, other: "RasterSet") -> None:
        if self.grid != other.grid:
            raise GridMismatch(f"{self.grid} vs {other.grid}")

    def __and__(self, other: "RasterSet") -> "RasterSet":
        self._check(other)
        return RasterSet(self.grid, self.cells & other.cells)

    def __or__(self, other: "RasterSet") -> "RasterSet":
        self._check(other)
        return RasterSet(self.grid, self.cells | other.cells)

    def __xor__(self, other: "RasterSet") -> "RasterSet":
        self._check(other)
        return RasterSet(self.grid, self.cells ^ other.cells)

    def __sub__(self, other: "RasterSet") -> "RasterSet":
        self._check(other)
        return RasterSet(self.grid, self.cells & ~other.cells)

    def __le__(self, other: "RasterSet") -> bool:
        self._check(other)
        return not np.any(self.cells & ~other.cells)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RasterSet):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.cells, other.cells)

    __hash__ = None

    def __repr__(self) -> str:
        return f"RasterSet(n={self.grid.resolution}, L={self.grid.half_width}, popcount={self.popcount})"


# ---------------------------------------------------------------------------
# Shapes


def _pair(p) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in p)
    except (TypeError, ValueError) as exc:
        raise MalformedShape(f"expected a 2-vector, got {p!r}") from exc
    if not (math.isfinite(a) and math.isfinite(b)):
        raise MalformedShape(f"non-finite coordinate in {p!r}")
    return a, b


def _positive(name: str, v) -> float:
    v = float(v)
    if not v > 0 or not math.isfinite(v):
        raise MalformedShape(f"{name} must be > 0, got {v}")
    return v


@dataclass(frozen=True)
class Disk:
    """Open disk ``|x - center| < radius``."""

    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _pair(self.center))
        object.__setattr__(self, "radius", _positive("radius", self.radius))

    def contains(self, x, y, strict: bool = False):
        cx, cy = self.center
        return np.hypot(x - cx, y - cy) < self.radius


@dataclass(frozen=True)
class Rect:
    """Closed axis-aligned rectangle ``[lo, hi]``."""

    lo: tuple[float, float]
    hi: tuple[float, float]

    def __post_init__(self):
        lo, hi = _pair(self.lo), _pair(self.hi)
        if not (lo[0] < hi[0] and lo[1] < hi[1]):
            raise MalformedShape(f"Rect needs lo < hi componentwise, got {lo}, {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def contains(self, x, y, strict: bool = False):
        (x0, y0), (x1, y1) = self.lo, self.hi
        if strict:
            return (x > x0) & (x < x1) & (y > y0) & (y < y1)
        return (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)


@dataclass(frozen=True)
class Annulus:
    """``r_in <= |x - center| < r_out``."""

    center: tuple[float, float]
    r_in: float
    r_out: float

    def __post_init__(self):
        object.__setattr__(self, "center", _pair(self.center))
        r_in, r_out = float(self.r_in), _positive("r_out", self.r_out)
        if not (0 <= r_in < r_out):
            raise MalformedShape(f"Annulus needs 0 <= r_in < r_out, got {r_in}, {r_out}")
        object.__setattr__(self, "r_in", r_in)
        object.__setattr__(self, "r_out", r_out)

    def contains(self, x, y, strict: bool = False):
        cx, cy = self.center
        d = np.hypot(x - cx, y - cy)
        inner = d > self.r_in if strict else d >= self.r_in
        return inner & (d < self.r_out)


@dataclass(frozen=True)
class HalfDisk:
    """Origin-centered open half-disk on the side ``sign * y > 0``."""

    radius: float
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "radius", _positive("radius", self.radius))
        if self.sign not in (1, -1):
            raise MalformedShape(f"HalfDisk sign must be +1 or -1, got {self.sign}")

    def contains(self, x, y, strict: bool = False):
        return (np.hypot(x, y) < self.radius) & (self.sign * y > 0)


@dataclass(frozen=True)
class Union:
    parts: tuple = field(default_factory=tuple)

    def __post_init__(self):
        parts = tuple(self.parts)
        for p in parts:
            if not isinstance(p, _SHAPE_TYPES):
                raise MalformedShape(f"Union member is not a shape: {p!r}")
        object.__setattr__(self, "parts", parts)

    def contains(self, x, y, strict: bool = False):
        out = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        for p in self.parts:
            out |= p.contains(x, y, strict)
        return out


@dataclass(frozen=True)
class Difference:
    """``a`` minus the strict interior of ``b``."""

    a: "ShapeSpec"
    b: "ShapeSpec"

    def __post_init__(self):
        for p in (self.a, self.b):
            if not isinstance(p, _SHAPE_TYPES):
                raise MalformedShape(f"Difference operand is not a shape: {p!r}")

    def contains(self, x, y, strict: bool = False):
        return self.a.contains(x, y, strict) & ~self.b.contains(x, y, True)


_SHAPE_TYPES = (Disk, Rect, Annulus, HalfDisk, Union, Difference)
ShapeSpec = Disk | Rect | Annulus | HalfDisk | Union | Difference


def rasterize(grid: Grid, shape: ShapeSpec) -> RasterSet:
    """Cell-center membership: a cell is occupied iff its center lies in ``shape``."""
    if not isinstance(shape, _SHAPE_TYPES):
        raise MalformedShape(f"not a shape: {shape!r}")
    return RasterSet(grid, shape.contains(grid.x, grid.y))


# ---------------------------------------------------------------------------
# Measures


def measure(s: RasterSet) -> float:
    return s.popcount * s.grid.cell_area


def symm_diff_measure(a: RasterSet, b: RasterSet) -> float:
    """The d1 metric: area of the symmetric difference."""
    a._check(b)
    return int(np.count_nonzero(a.cells ^ b.cells)) * a.grid.cell_area


def rearrange_star(s: RasterSet) -> RasterSet:
    """Discrete spherical rearrangement: the ``popcount`` cells closest to the origin."""
    return RasterSet.from_indices(s.grid, s.grid.star_order[: s.popcount])


def asymmetry_quanta(s: RasterSet) -> int:
    return int(s.grid.asym_weights[s.cells].sum())


def asymmetry(s: RasterSet) -> float:
    """``J(X) = integral over X of |x|^2/(1+|x|^2)``, midpoint rule on cell centers."""
    return asymmetry_quanta(s) * s.grid.asym_quantum


# ---------------------------------------------------------------------------
# Plain PBM (P1) snapshots


def save_pbm(s: RasterSet, path: str | os.PathLike) -> None:
    n = s.grid.resolution
    rows = np.flipud(s.image)  # file row 0 is the top of the window
    chars = np.where(rows, "1", "0")
    body = "\n".join(" ".join(r) for r in chars)
    try:
        Path(path).write_text(f"P1\n{n} {n}\n{body}\n", encoding="ascii")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def _pbm_tokens(text: str) -> list[str]:
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    return tokens


def load_pbm(grid: Grid, path: str | os.PathLike) -> RasterSet:
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise MalformedHeader(f"{path}: not a plain PBM file") from exc
    except OSError as exc:
        raise IoFailure(str(exc)) from exc

    tokens = _pbm_tokens(text)
    if not tokens or tokens[0] != "P1":
        magic = tokens[0] if tokens else "<empty>"
        raise MalformedHeader(f"{path}: expected magic 'P1', got {magic!r}")
    try:
        width, height = int(tokens[1]), int(tokens[2])
    except (IndexError, ValueError) as exc:
        raise MalformedHeader(f"{path}: missing or invalid dimensions") from exc
    n = grid.resolution
    if (width, height) != (n, n):
        raise DimensionMismatch(f"{path}: file is {width}x{height}, grid is {n}x{n}")

    digits = "".join(tokens[3:])  # P1 allows digits with or without separators
    if len(digits) != n * n or set(digits) - {"0", "1"}:
        raise MalformedHeader(f"{path}: expected {n * n} binary digits")
    rows = np.frombuffer(digits.encode("ascii"), dtype=np.uint8).reshape(n, n) == ord("1")
    return RasterSet(grid, np.flipud(rows))
