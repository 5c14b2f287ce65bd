"""Polar embedding of a state space onto the unit disk.

Each axis owns an equal angular sector of width 2*pi/d, placed counter-
clockwise in axis order starting at the rotation constant theta0. Levels map
to concentric rings of equal radial width 1/n_i; the marker position of
level l sits at normalized radius (l + 1/2) / n_i on the sector's center
angle. Angular and radial intervals are half-open: [start, end) and
[inner, outer), which makes point-to-segment hit testing unambiguous. All
angles are radians; pixel scaling and screen-axis flips are the renderer's
concern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import LevelRangeError
from .model import StateSpace

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, slots=True)
class Sector:
    axis_id: str
    start: float
    end: float
    center: float


@dataclass(frozen=True, slots=True)
class Ring:
    inner: float
    outer: float
    center: float


@dataclass(frozen=True, slots=True)
class ThresholdArc:
    axis_id: str
    axis_index: int
    radius: float
    start: float
    end: float


@dataclass(frozen=True)
class PolarLayout:
    d: int
    theta0: float
    sector_width: float
    sectors: tuple[Sector, ...]
    rings: tuple[tuple[Ring, ...], ...]
    threshold_arcs: tuple[ThresholdArc, ...]


def layout(space: StateSpace, theta0: float = 0.0) -> PolarLayout:
    """Compute sector angles, ring radii and threshold arcs for a space."""
    d = space.d
    width = TWO_PI / d
    sectors = []
    rings = []
    arcs = []
    for i, axis in enumerate(space.axes):
        start = theta0 + i * width
        sectors.append(
            Sector(
                axis_id=axis.id,
                start=start,
                end=start + width,
                center=theta0 + (i + 0.5) * width,
            )
        )
        n = axis.n
        rings.append(
            tuple(
                Ring(inner=lvl / n, outer=(lvl + 1) / n, center=(lvl + 0.5) / n)
                for lvl in range(n)
            )
        )
        if axis.threshold is not None:
            # boundary above the last acceptable level
            arcs.append(
                ThresholdArc(
                    axis_id=axis.id,
                    axis_index=i,
                    radius=(axis.threshold + 1) / n,
                    start=start,
                    end=start + width,
                )
            )
    return PolarLayout(
        d=d,
        theta0=theta0,
        sector_width=width,
        sectors=tuple(sectors),
        rings=tuple(rings),
        threshold_arcs=tuple(arcs),
    )


def locate(lay: PolarLayout, axis_index: int, level: int) -> tuple[float, float]:
    """Marker position (radius, angle) for a level: ring center at sector center."""
    if not 0 <= axis_index < lay.d:
        raise LevelRangeError(
            f"axis index {axis_index} outside 0..{lay.d - 1}", axis=axis_index
        )
    axis_rings = lay.rings[axis_index]
    if not 0 <= level < len(axis_rings):
        raise LevelRangeError(
            f"level {level} outside 0..{len(axis_rings) - 1}",
            axis=axis_index,
            level=level,
        )
    return axis_rings[level].center, lay.sectors[axis_index].center


def hit_test(
    lay: PolarLayout, radius: float, angle: float
) -> tuple[int, int] | None:
    """Map a point to the (axis index, level) whose segment contains it.

    Returns None at or beyond the disk rim (the outer bound is exclusive).
    The angle may be any real number; it is reduced modulo 2*pi relative
    to theta0, so a point exactly on a sector boundary belongs to the
    sector that starts there.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if radius >= 1.0:
        return None
    turn = (angle - lay.theta0) % TWO_PI
    axis_index = min(int(turn / lay.sector_width), lay.d - 1)
    n = len(lay.rings[axis_index])
    level = min(int(radius * n), n - 1)
    return axis_index, level
