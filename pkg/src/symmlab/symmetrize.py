"""Steiner, polarization, cap and truncated-cap symmetrizations on raster sets.

Every operator is an exact rearrangement: cells are grouped into buckets
(lines for Steiner, circles for cap, reflection pairs for polarization), the
number of occupied cells per bucket is kept, and the occupied cells are
reselected by a fixed total order inside the bucket.  Because the order only
depends on geometry, the outputs for two inputs are nested bucket by bucket,
which makes idempotence, measure preservation and nonexpansiveness exact.

Only cells within ``max_radius(X) + 2h`` of the origin can be selected by the
Steiner and cap orders (the selected cells never lie farther from the origin
than the occupied cell they replace, up to one cell), so ranking is restricted
to that disk.  ``restrict=False`` ranks the whole grid and gives identical
output; it exists for testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam
from .geometry import RasterSet

__all__ = [
    "SteinerParam",
    "AxisParam",
    "SharpParam",
    "SymmParam",
    "SHARP_AXIS_PHI",
    "steiner",
    "polarize",
    "cap_symmetrize",
    "cap_sharp",
    "apply",
]

TWO_PI = 2.0 * math.pi

# Axis e of the truncated cap space; e = e2 makes the upper/lower half-disks
# the natural fixtures.
SHARP_AXIS_PHI = math.pi / 2

# Cells closer than this (in units of h) to a polarization line count as on it.
LINE_EPS = 1e-9


@dataclass(frozen=True)
class SteinerParam:
    """Direction ``u = (cos theta, sin theta)``, taken modulo pi."""

    theta: float

    def __post_init__(self):
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise InvalidParam(f"theta must be finite, got {theta}")
        object.__setattr__(self, "theta", theta % math.pi)

    family = "steiner"

    @property
    def values(self) -> tuple[float, ...]:
        return (self.theta,)


@dataclass(frozen=True)
class AxisParam:
    """Axis ``e = (cos phi, sin phi)`` and offset ``r >= 0``.

    ``kind`` selects the operator family: ``"polar"`` for the polarization with
    half-plane ``{x.e <= r}``, ``"cap"`` for the cap symmetrization about the
    half-line starting at ``r e``.
    """

    phi: float
    r: float
    kind: str = "cap"

    def __post_init__(self):
        phi, r = float(self.phi), float(self.r)
        if not (math.isfinite(phi) and math.isfinite(r)):
            raise InvalidParam(f"non-finite axis parameter ({phi}, {r})")
        if r < 0:
            raise InvalidParam(f"r must be >= 0, got {r}")
        if self.kind not in ("cap", "polar"):
            raise InvalidParam(f"kind must be 'cap' or 'polar', got {self.kind!r}")
        object.__setattr__(self, "phi", phi % TWO_PI)
        object.__setattr__(self, "r", r)

    @property
    def family(self) -> str:
        return self.kind

    @property
    def values(self) -> tuple[float, ...]:
        return (self.phi, self.r)

    @property
    def on_boundary(self) -> bool:
        return self.r == 0.0


@dataclass(frozen=True)
class SharpParam:
    """Point ``(spin, r)`` of the truncated cap space.

    ``(+1, r)`` acts as the cap symmetrization ``(e, r)``; every ``(-1, r)``
    acts as ``(-e, 0)``.
    """

    spin: int
    r: float

    def __post_init__(self):
        if self.spin not in (1, -1):
            raise InvalidParam(f"spin must be +1 or -1, got {self.spin}")
        r = float(self.r)
        if not (math.isfinite(r) and r >= 0):
            raise InvalidParam(f"r must be finite and >= 0, got {r}")
        object.__setattr__(self, "spin", int(self.spin))
        object.__setattr__(self, "r", r)

    family = "sharp"

    @property
    def values(self) -> tuple[float, ...]:
        return (float(self.spin), self.r)

    @property
    def on_boundary(self) -> bool:
        return self.r == 0.0


SymmParam = SteinerParam | AxisParam | SharpParam


def _unit(phi: float) -> tuple[float, float]:
    c, s = math.cos(phi), math.sin(phi)
    # Snap the ~1e-16 residues at multiples of pi/2 so axis directions bucket
    # into exact grid rows/columns.
    if abs(c) < 1e-12:
        c = 0.0
    if abs(s) < 1e-12:
        s = 0.0
    return c, s


def _candidates(x: RasterSet, restrict: bool) -> np.ndarray:
    g = x.grid
    if not restrict:
        return np.arange(g.size)
    return g.cells_within(x.max_radius() + 2 * g.spacing)


def _bucket_select(x: RasterSet, cand, bucket, key, negative) -> RasterSet:
    """Keep per-bucket counts; occupy the first cells in (key, negative, index) order."""
    b = bucket - bucket.min()
    order = np.lexsort((negative, key, b))  # stable: cand is ascending, so index breaks ties
    sb = b[order]
    first = np.flatnonzero(np.r_[True, sb[1:] != sb[:-1]])
    start = np.repeat(first, np.diff(np.r_[first, sb.size]))
    rank = np.arange(sb.size) - start
    quota = np.bincount(b[x.cells[cand]], minlength=int(b.max()) + 1)
    keep = order[rank < quota[sb]]
    return RasterSet.from_indices(x.grid, cand[keep])


def steiner(x: RasterSet, p: SteinerParam, *, restrict: bool = True) -> RasterSet:
    """Recenter every line section parallel to ``u`` on the line ``u^perp``.

    Cells are bucketed by ``floor((c . u^perp) / h)``; inside a bucket the
    occupied cells become those with smallest ``|c . u|`` (positive side first
    on ties).
    """
    if x.popcount == 0:
        return x
    g = x.grid
    c, s = _unit(p.theta)
    cand = _candidates(x, restrict)
    px, py = g.x[cand], g.y[cand]
    bucket = np.floor((-s * px + c * py) / g.spacing).astype(np.int64)
    t = c * px + s * py
    return _bucket_select(x, cand, bucket, np.abs(t), t < 0)


def cap_symmetrize(x: RasterSet, p: AxisParam, *, restrict: bool = True) -> RasterSet:
    """Rearrange every circle around ``r e`` into an arc centered toward ``-e``.

    Cells are bucketed by ring ``floor(|c - r e| / h)``; inside a ring the
    occupied cells become those with smallest angle (seen from ``r e``) to the
    direction ``-e``, positive angular side first on ties.
    """
    if x.popcount == 0:
        return x
    g = x.grid
    ex, ey = _unit(p.phi)
    cand = _candidates(x, restrict)
    vx = g.x[cand] - p.r * ex
    vy = g.y[cand] - p.r * ey
    ring = np.floor(np.hypot(vx, vy) / g.spacing).astype(np.int64)
    # angle of v measured from -e, counter-clockwise positive
    psi = np.arctan2(-ex * vy + ey * vx, -ex * vx - ey * vy)
    return _bucket_select(x, cand, ring, np.abs(psi), psi < 0)


MATCH_ROUNDS = (0, 1, 1, 1, 2, 2, 3)  # proposal window radius per round, in cells


def _offsets(radius: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(-radius, radius + 1)
    di, dj = np.meshgrid(k, k, indexing="xy")
    return di.ravel(), dj.ravel()


_OFFSETS = {r: _offsets(r) for r in set(MATCH_ROUNDS)}


def _match(g, p: AxisParam) -> tuple[np.ndarray, np.ndarray]:
    """Pair cells inside ``H`` with cells outside, close to their mirror images.

    Deterministic proposal rounds: every unmatched inside cell proposes to
    the free outside cell nearest its mirror point within a small window, and
    every outside cell keeps its nearest proposer (ties by index).  Round 0
    only proposes to the cell containing the mirror point; later rounds widen
    the window to repair collisions.

    A proposal is admissible only if the outside cell is at least as far from
    the origin as the inside one, as ``|x'| >= |x|`` holds in the plane for
    every ``x`` in ``H``.  Then no pair moves mass outward: ``J`` never
    increases, and a star set can only trade cells of equal radius.
    Returns ``(inside, outside)`` arrays.
    """
    n, h = g.resolution, g.spacing
    ex, ey = _unit(p.phi)
    t = g.x * ex + g.y * ey - p.r
    eps = LINE_EPS * h
    inside = np.flatnonzero(t < -eps)
    t_in = t[inside]
    free = t > eps
    mx = g.x[inside] - 2 * t_in * ex  # mirror points
    my = g.y[inside] - 2 * t_in * ey
    bi = np.floor(mx / h + n / 2).astype(np.int64)
    bj = np.floor(my / h + n / 2).astype(np.int64)
    reach = max(MATCH_ROUNDS)
    alive = np.flatnonzero((bi >= -reach) & (bi < n + reach) & (bj >= -reach) & (bj < n + reach))

    pairs_in, pairs_out = [], []
    for radius in MATCH_ROUNDS:
        if alive.size == 0:
            break
        di, dj = _OFFSETS[radius]
        ci = bi[alive, None] + di
        cj = bj[alive, None] + dj
        ok = (ci >= 0) & (ci < n) & (cj >= 0) & (cj < n)
        cand = np.where(ok, cj * n + ci, 0)
        ok &= free[cand] & (g.r2[cand] >= g.r2[inside[alive]][:, None])
        d2 = np.where(ok, (g.x[cand] - mx[alive, None]) ** 2 + (g.y[cand] - my[alive, None]) ** 2, np.inf)
        best = np.argmin(d2, axis=1)
        rows = np.arange(alive.size)
        d = d2[rows, best]
        has = np.isfinite(d)
        a, b, d = alive[has], cand[rows, best][has], d[has]
        if a.size == 0:
            continue
        # uncontested proposals win outright; contested ones go to the nearest
        contested = np.bincount(b, minlength=g.size)[b] > 1
        solo, multi = np.flatnonzero(~contested), np.flatnonzero(contested)
        order = multi[np.lexsort((inside[a[multi]], d[multi], b[multi]))]
        first = np.r_[True, b[order][1:] != b[order][:-1]] if order.size else np.zeros(0, bool)
        keep = np.concatenate([solo, order[first]])
        pairs_in.append(inside[a[keep]])
        pairs_out.append(b[keep])
        free[b[keep]] = False
        done = np.zeros(inside.size, dtype=bool)
        done[a[keep]] = True
        alive = alive[~done[alive]]
    if not pairs_in:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(pairs_in), np.concatenate(pairs_out)


def polarization_partner(g, idx: np.ndarray, p: AxisParam) -> np.ndarray:
    """Partner of each cell under the reflection matching over the whole grid, ``-1`` if unpaired."""
    near, far = _match(g, p)
    partner = np.full(g.size, -1, dtype=np.int64)
    partner[near] = far
    partner[far] = near
    return partner[np.asarray(idx, dtype=np.int64)]


def polarize(x: RasterSet, p: AxisParam) -> RasterSet:
    """Two-point rearrangement toward the half-plane ``H = {x.e <= r}``.

    For every pair ``(i, j)`` with ``i`` in ``H``: ``i`` is occupied in the
    output iff ``i`` or ``j`` is occupied in the input, ``j`` iff both are.
    Unpaired cells are unchanged.
    """
    g = x.grid
    occ = np.flatnonzero(x.cells)
    if occ.size == 0:
        return x
    ex, ey = _unit(p.phi)
    if (g.x[occ] * ex + g.y[occ] * ey - p.r).max() <= LINE_EPS * g.spacing:
        return x  # nothing outside H: every pair is already (A_i, 0)
    near, far = _match(g, p)
    cells = x.cells.copy()
    ci, cj = x.cells[near], x.cells[far]
    cells[near] = ci | cj
    cells[far] = ci & cj
    return RasterSet(g, cells)


def cap_sharp(x: RasterSet, p: SharpParam, *, axis_phi: float = SHARP_AXIS_PHI) -> RasterSet:
    if p.spin == 1:
        return cap_symmetrize(x, AxisParam(axis_phi, p.r, "cap"))
    return cap_symmetrize(x, AxisParam(axis_phi + math.pi, 0.0, "cap"))


def apply(x: RasterSet, p: SymmParam) -> RasterSet:
    """Apply any symmetrization parameter to a raster set."""
    if isinstance(p, SteinerParam):
        return steiner(x, p)
    if isinstance(p, AxisParam):
        return polarize(x, p) if p.kind == "polar" else cap_symmetrize(x, p)
    if isinstance(p, SharpParam):
        return cap_sharp(x, p)
    raise TypeError(f"not a symmetrization parameter: {p!r}")
