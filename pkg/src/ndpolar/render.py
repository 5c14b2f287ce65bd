"""Deterministic SVG rendering of matrix slices and polar heatmaps.

Output is byte-stable for identical inputs: floats are always formatted
with 6 decimal places and every element is emitted in a fixed order.
Element classes are part of the output contract (tests and the UI rely on
them): ``cell``, ``risk-frame``, ``segment``, ``threshold-arc``,
``risk-cross``, ``context-dot``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping
from xml.sax.saxutils import escape

from .aggregate import aggregate_slice
from .errors import RenderError, SchemaError
from .geometry import layout, locate
from .model import RiskModel, RiskPosition, matrix_slice

#: Sector boundaries on the diagonals, primary axes on the cardinal directions.
DEFAULT_THETA0 = -math.pi / 4


@dataclass(frozen=True)
class RenderSpec:
    view: str = "polar"  # "matrix" | "polar"
    width: int = 640
    height: int = 640
    theme: Mapping[str, str] = field(default_factory=dict)
    show_labels: bool = True
    show_thresholds: bool = True
    theta0: float = DEFAULT_THETA0

    def __post_init__(self):
        if self.view not in ("matrix", "polar"):
            raise SchemaError(f"unknown view {self.view!r}", view=self.view)
        if self.width <= 0 or self.height <= 0:
            raise SchemaError("render size must be positive")

    def validate_theme(self, model: RiskModel) -> None:
        unknown = [g for g in self.theme if g not in model.scale]
        if unknown:
            raise SchemaError(
                f"theme overrides unknown grades: {', '.join(sorted(unknown))}",
                grades=sorted(unknown),
            )


def _f(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _color(model: RiskModel, spec: RenderSpec, grade: str) -> str:
    return spec.theme.get(grade) or model.scale.color_of(grade)


def render_matrix(
    model: RiskModel,
    sigma: Mapping[str, int | str],
    risk: RiskPosition | None = None,
    spec: RenderSpec | None = None,
) -> str:
    """SVG for one 2D slice: grade-colored cells, context header, risk frame."""
    spec = spec or RenderSpec(view="matrix", width=760, height=560)
    spec.validate_theme(model)
    risk = risk or model.risk
    if risk is None:
        raise RenderError("no risk position: pass one or set it on the model")
    grid_slice = matrix_slice(model, sigma)
    lik, imp = grid_slice.likelihood_axis, grid_slice.impact_axis
    r1 = lik.level_of(risk.likelihood)
    r2 = imp.level_of(risk.impact)

    pad = 12.0
    header_h = 26.0 + 18.0 * len(grid_slice.sigma)
    label_w = 130.0 if spec.show_labels else 8.0
    label_h = 48.0 if spec.show_labels else 8.0
    grid_x = pad + label_w
    grid_y = pad + header_h
    cw = (spec.width - grid_x - pad) / lik.n
    ch = (spec.height - grid_y - label_h - pad) / imp.n

    out = [_svg_open(spec.width, spec.height)]
    out.append('<g class="context-header" font-size="14">')
    ty = pad + 18.0
    for axis_id, level in grid_slice.sigma:
        axis = model.space.axis(axis_id)
        out.append(
            f'<text class="context-value" x="{_f(pad)}" y="{_f(ty)}">'
            f"{escape(axis_id)}: {escape(axis.labels[level])}</text>"
        )
        ty += 18.0
    out.append("</g>")

    def cell_xy(l1: int, l2: int) -> tuple[float, float]:
        return grid_x + l1 * cw, grid_y + (imp.n - 1 - l2) * ch

    out.append('<g class="cells" stroke="#000000" stroke-width="0.500000">')
    for l2 in range(imp.n - 1, -1, -1):
        for l1 in range(lik.n):
            x, y = cell_xy(l1, l2)
            color = _color(model, spec, grid_slice.cell(l1, l2))
            out.append(
                f'<rect class="cell" data-l1="{l1}" data-l2="{l2}" '
                f'x="{_f(x)}" y="{_f(y)}" width="{_f(cw)}" height="{_f(ch)}" '
                f'fill="{escape(color)}"/>'
            )
    out.append("</g>")

    fx, fy = cell_xy(r1, r2)
    out.append(
        f'<rect class="risk-frame" x="{_f(fx)}" y="{_f(fy)}" '
        f'width="{_f(cw)}" height="{_f(ch)}" fill="none" '
        f'stroke="#000000" stroke-width="1.200000"/>'
    )

    if spec.show_labels:
        out.append('<g class="labels" font-size="12">')
        for l2 in range(imp.n):
            _, y = cell_xy(0, l2)
            out.append(
                f'<text class="row-label" text-anchor="end" '
                f'x="{_f(grid_x - 6.0)}" y="{_f(y + ch / 2 + 4.0)}">'
                f"{escape(imp.labels[l2])}</text>"
            )
        for l1 in range(lik.n):
            x, _ = cell_xy(l1, 0)
            out.append(
                f'<text class="col-label" text-anchor="middle" '
                f'x="{_f(x + cw / 2)}" y="{_f(grid_y + imp.n * ch + 16.0)}">'
                f"{escape(lik.labels[l1])}</text>"
            )
        out.append(
            f'<text class="axis-title" text-anchor="middle" '
            f'x="{_f(grid_x + lik.n * cw / 2)}" '
            f'y="{_f(grid_y + imp.n * ch + 36.0)}">{escape(lik.id)}</text>'
        )
        out.append(
            f'<text class="axis-title" text-anchor="middle" '
            f'transform="rotate(-90 {_f(pad + 14.0)} '
            f'{_f(grid_y + imp.n * ch / 2)})" x="{_f(pad + 14.0)}" '
            f'y="{_f(grid_y + imp.n * ch / 2)}">{escape(imp.id)}</text>'
        )
        out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_polar(
    model: RiskModel,
    sigma: Mapping[str, int | str],
    risk: RiskPosition | None = None,
    spec: RenderSpec | None = None,
) -> str:
    """SVG polar heatmap: one annular segment per (axis, level).

    Primary-axis segments are colored by the slice aggregates, context-axis
    segments by the axis profile; the current risk position is drawn as two
    crosses and the slice selection as one dot per context axis.
    """
    spec = spec or RenderSpec(view="polar")
    spec.validate_theme(model)
    risk = risk or model.risk
    if risk is None:
        raise RenderError("no risk position: pass one or set it on the model")
    for axis in model.space.context_axes:
        if axis.profile is None:
            raise RenderError(
                f"context axis {axis.id!r} has no level profile; add a "
                f"'profile' listing one grade per level to color its rings",
                axis=axis.id,
            )

    grid_slice = matrix_slice(model, sigma)
    lik_agg, imp_agg = aggregate_slice(model.scale, grid_slice, risk)
    lay = layout(model.space, spec.theta0)

    cx, cy = spec.width / 2.0, spec.height / 2.0
    margin = 70.0 if spec.show_labels else 12.0
    scale_px = min(spec.width, spec.height) / 2.0 - margin

    def pt(rho: float, theta: float) -> tuple[float, float]:
        return cx + scale_px * rho * math.cos(theta), cy - scale_px * rho * math.sin(theta)

    large_arc = 1 if lay.sector_width > math.pi else 0

    def segment_path(inner: float, outer: float, start: float, end: float) -> str:
        x0, y0 = pt(outer, start)
        x1, y1 = pt(outer, end)
        d = (
            f"M {_f(x0)} {_f(y0)} "
            f"A {_f(scale_px * outer)} {_f(scale_px * outer)} 0 {large_arc} 0 "
            f"{_f(x1)} {_f(y1)} "
        )
        if inner > 0.0:
            x2, y2 = pt(inner, end)
            x3, y3 = pt(inner, start)
            d += (
                f"L {_f(x2)} {_f(y2)} "
                f"A {_f(scale_px * inner)} {_f(scale_px * inner)} 0 {large_arc} 1 "
                f"{_f(x3)} {_f(y3)} "
            )
        else:
            d += f"L {_f(cx)} {_f(cy)} "
        return d + "Z"

    per_axis_colors: list[tuple[str, ...]] = []
    for i, axis in enumerate(model.space.axes):
        if i == 0:
            grades = lik_agg.per_level
        elif i == 1:
            grades = imp_agg.per_level
        else:
            grades = axis.profile or ()
        per_axis_colors.append(tuple(_color(model, spec, g) for g in grades))

    out = [_svg_open(spec.width, spec.height)]
    out.append('<g class="segments" stroke="#444444" stroke-width="0.500000">')
    for i, axis in enumerate(model.space.axes):
        sector = lay.sectors[i]
        for lvl, ring in enumerate(lay.rings[i]):
            out.append(
                f'<path class="segment" data-axis="{escape(axis.id)}" '
                f'data-level="{lvl}" '
                f'd="{segment_path(ring.inner, ring.outer, sector.start, sector.end)}" '
                f'fill="{escape(per_axis_colors[i][lvl])}"/>'
            )
    out.append("</g>")

    if spec.show_thresholds:
        out.append('<g class="threshold-arcs" fill="none" stroke="#000000" '
                   'stroke-width="2.000000">')
        for arc in lay.threshold_arcs:
            x0, y0 = pt(arc.radius, arc.start)
            x1, y1 = pt(arc.radius, arc.end)
            r_px = scale_px * arc.radius
            out.append(
                f'<path class="threshold-arc" data-axis="{escape(arc.axis_id)}" '
                f'd="M {_f(x0)} {_f(y0)} A {_f(r_px)} {_f(r_px)} 0 {large_arc} 0 '
                f'{_f(x1)} {_f(y1)}"/>'
            )
        out.append("</g>")

    r1 = model.space.likelihood.level_of(risk.likelihood)
    r2 = model.space.impact.level_of(risk.impact)
    out.append('<g class="markers" stroke="#000000" stroke-width="2.000000">')
    for axis_index, level in ((0, r1), (1, r2)):
        rho, theta = locate(lay, axis_index, level)
        x, y = pt(rho, theta)
        k = 6.0
        out.append(
            f'<path class="risk-cross" data-axis="'
            f'{escape(model.space.axes[axis_index].id)}" '
            f'd="M {_f(x - k)} {_f(y - k)} L {_f(x + k)} {_f(y + k)} '
            f'M {_f(x - k)} {_f(y + k)} L {_f(x + k)} {_f(y - k)}"/>'
        )
    resolved = dict(grid_slice.sigma)
    for i, axis in enumerate(model.space.context_axes, start=2):
        rho, theta = locate(lay, i, resolved[axis.id])
        x, y = pt(rho, theta)
        out.append(
            f'<circle class="context-dot" data-axis="{escape(axis.id)}" '
            f'cx="{_f(x)}" cy="{_f(y)}" r="4.500000" fill="#000000"/>'
        )
    out.append("</g>")

    if spec.show_labels:
        out.append('<g class="axis-labels" font-size="14" text-anchor="middle">')
        for i, axis in enumerate(model.space.axes):
            x, y = pt(1.0 + 36.0 / scale_px, lay.sectors[i].center)
            out.append(
                f'<text class="axis-label" x="{_f(x)}" y="{_f(y)}">'
                f"{escape(axis.id)}</text>"
            )
        out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _svg_open(width: int, height: int) -> str:
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
