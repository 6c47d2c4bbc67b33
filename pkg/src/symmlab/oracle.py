"""Continuum references for checking the raster code.

Nothing in here touches the grid: areas and perimeters are closed forms, the
asymmetry of a disk is an adaptive quadrature in polar coordinates around the
disk center, the cap of a disk is an arc half-angle per circle, and the
Steiner column oracle counts indices directly.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import StraddlingUnsupported, UnsupportedComposite
from .geometry import Annulus, Difference, Disk, HalfDisk, Rect, ShapeSpec, Union
from .symmetrize import AxisParam

__all__ = [
    "exact_measure",
    "exact_perimeter",
    "exact_asymmetry_disk",
    "closed_form_asymmetry_centered_disk",
    "exact_polarize_disk",
    "exact_cap_disk",
    "steiner_1d_oracle",
]

QUAD_TOL = 1e-10


def _bbox(s):
    if isinstance(s, Disk):
        (cx, cy), r = s.center, s.radius
        return cx - r, cy - r, cx + r, cy + r
    if isinstance(s, Annulus):
        (cx, cy), r = s.center, s.r_out
        return cx - r, cy - r, cx + r, cy + r
    if isinstance(s, HalfDisk):
        r = s.radius
        return (-r, 0.0, r, r) if s.sign > 0 else (-r, -r, r, 0.0)
    if isinstance(s, Rect):
        return (*s.lo, *s.hi)
    raise UnsupportedComposite(f"no bounding box for {type(s).__name__}")


def _disjoint(a, b) -> bool:
    round_types = (Disk, Annulus)
    if isinstance(a, round_types) and isinstance(b, round_types):
        ra = a.radius if isinstance(a, Disk) else a.r_out
        rb = b.radius if isinstance(b, Disk) else b.r_out
        return math.dist(a.center, b.center) >= ra + rb
    ax0, ay0, ax1, ay1 = _bbox(a)
    bx0, by0, bx1, by1 = _bbox(b)
    return ax1 <= bx0 or bx1 <= ax0 or ay1 <= by0 or by1 <= ay0


def _primitives(shape: ShapeSpec) -> list:
    if isinstance(shape, Union):
        parts = [p for s in shape.parts for p in _primitives(s)]
        for a, b in itertools.combinations(parts, 2):
            if not _disjoint(a, b):
                raise UnsupportedComposite(f"cannot certify that {a} and {b} are disjoint")
        return parts
    if isinstance(shape, Difference):
        raise UnsupportedComposite("differences have no closed-form oracle")
    return [shape]


def exact_measure(shape: ShapeSpec) -> float:
    """Area of a primitive or of a union of pairwise disjoint primitives."""
    total = 0.0
    for s in _primitives(shape):
        if isinstance(s, Disk):
            total += math.pi * s.radius**2
        elif isinstance(s, Annulus):
            total += math.pi * (s.r_out**2 - s.r_in**2)
        elif isinstance(s, HalfDisk):
            total += 0.5 * math.pi * s.radius**2
        elif isinstance(s, Rect):
            total += (s.hi[0] - s.lo[0]) * (s.hi[1] - s.lo[1])
    return total


def exact_perimeter(shape: ShapeSpec) -> float:
    """Boundary length; for unions this is the sum over parts (exact when they do not touch)."""
    total = 0.0
    for s in _primitives(shape):
        if isinstance(s, Disk):
            total += 2 * math.pi * s.radius
        elif isinstance(s, Annulus):
            total += 2 * math.pi * (s.r_out + s.r_in)
        elif isinstance(s, HalfDisk):
            total += (math.pi + 2) * s.radius
        elif isinstance(s, Rect):
            total += 2 * ((s.hi[0] - s.lo[0]) + (s.hi[1] - s.lo[1]))
    return total


def exact_asymmetry_disk(center: Sequence[float], radius: float) -> float:
    """``integral over B(center, radius) of |x|^2 / (1 + |x|^2)`` by nested adaptive quadrature."""
    if not radius > 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    cx, cy = map(float, center)

    def ring(rho):
        def f(a):
            q = (cx + rho * math.cos(a)) ** 2 + (cy + rho * math.sin(a)) ** 2
            return q / (1.0 + q)

        val, _ = integrate.quad(f, 0.0, 2 * math.pi, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
        return rho * val

    val, _ = integrate.quad(ring, 0.0, radius, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return val


def closed_form_asymmetry_centered_disk(radius: float) -> float:
    """``2 pi int_0^R r^3/(1+r^2) dr = pi (R^2 - ln(1 + R^2))``."""
    return math.pi * (radius**2 - math.log1p(radius**2))


def exact_polarize_disk(disk: Disk, axis: AxisParam) -> Disk:
    """Polarization of a disk lying on one side of the line ``x.e = r``."""
    ex, ey = math.cos(axis.phi), math.sin(axis.phi)
    d = disk.center[0] * ex + disk.center[1] * ey - axis.r
    if d + disk.radius <= 0:
        return disk
    if d - disk.radius >= 0:
        cx, cy = disk.center
        return Disk((cx - 2 * d * ex, cy - 2 * d * ey), disk.radius)
    raise StraddlingUnsupported(f"{disk} straddles the line x.e = {axis.r}")


def exact_cap_disk(disk: Disk, axis: AxisParam):
    """Membership test for the cap symmetrization of a disk around ``r e``.

    The disk meets the circle of radius ``rho`` around ``r e`` in one arc of
    half-angle ``beta(rho)``; the image is ``{|psi| < beta(rho)}`` with ``psi``
    the angle from ``-e``.  Returns ``inside(x, y)`` for arrays of points.
    """
    ex, ey = math.cos(axis.phi), math.sin(axis.phi)
    cx, cy = axis.r * ex, axis.r * ey
    dist = math.hypot(disk.center[0] - cx, disk.center[1] - cy)
    a = disk.radius

    def inside(x, y):
        vx, vy = np.asarray(x) - cx, np.asarray(y) - cy
        rho = np.hypot(vx, vy)
        psi = np.arctan2(-ex * vy + ey * vx, -ex * vx - ey * vy)
        if dist == 0.0:
            return rho < a
        with np.errstate(divide="ignore", invalid="ignore"):
            k = (rho**2 + dist**2 - a**2) / (2 * rho * dist)
        beta = np.arccos(np.clip(k, -1.0, 1.0))
        return np.where(k <= -1, True, np.abs(psi) < beta) & (k < 1)

    return inside


def steiner_1d_oracle(column_counts: Sequence[int], column_length: int) -> list[tuple[int, int]]:
    """Centered half-open index interval ``[lo, hi)`` for each column count.

    Cells ``k`` of a column of even length ``n`` sit at ``(k - n/2 + 1/2) h``;
    filling by distance to the middle with the positive side first puts
    ``ceil(m/2)`` cells above the middle and ``floor(m/2)`` below.
    """
    mid = column_length // 2
    out = []
    for m in column_counts:
        if m < 0 or m > column_length:
            raise ValueError(f"count {m} outside [0, {column_length}]")
        out.append((mid - m // 2, mid + (m + 1) // 2))
    return out
