from __future__ import annotations

import math
import re
import xml.etree.ElementTree as ET

import pytest

from ndpolar.errors import RenderError, SchemaError
from ndpolar.model import RiskPosition
from ndpolar.render import RenderSpec, render_matrix, render_polar

from conftest import make_model

SIGMA = {"cooling": 1, "maintenance": 0}


def by_class(svg: str, cls: str) -> list[ET.Element]:
    root = ET.fromstring(svg)
    return [
        el for el in root.iter()
        if cls in (el.attrib.get("class") or "").split()
    ]


class TestMatrix:
    def test_cell_and_frame_counts(self, cooling):
        svg = render_matrix(cooling, SIGMA)
        assert len(by_class(svg, "cell")) == 25
        assert len(by_class(svg, "risk-frame")) == 1

    def test_header_shows_selected_labels(self, cooling):
        svg = render_matrix(cooling, SIGMA)
        assert "recently serviced" in svg
        svg_overdue = render_matrix(cooling, {"cooling": 1, "maintenance": 2})
        assert "overdue" in svg_overdue

    def test_red_cells_in_overdue_slice(self, cooling):
        svg = render_matrix(cooling, {"cooling": 1, "maintenance": 2})
        red = cooling.scale.color_of("red")
        reds = [el for el in by_class(svg, "cell") if el.attrib["fill"] == red]
        assert len(reds) == 3

    def test_frame_position_matches_risk(self, cooling):
        svg = render_matrix(cooling, SIGMA, RiskPosition(2, 2))
        (frame,) = by_class(svg, "risk-frame")
        cells = {
            (el.attrib["data-l1"], el.attrib["data-l2"]): el
            for el in by_class(svg, "cell")
        }
        target = cells[("2", "2")]
        assert frame.attrib["x"] == target.attrib["x"]
        assert frame.attrib["y"] == target.attrib["y"]
        assert frame.attrib["stroke-width"] == "1.200000"

    def test_byte_identical_output(self, cooling):
        a = render_matrix(cooling, SIGMA)
        b = render_matrix(cooling, SIGMA)
        assert a == b

    def test_all_fills_from_palette(self, cooling):
        svg = render_matrix(cooling, SIGMA)
        palette = {g.color for g in cooling.scale.grades}
        for el in by_class(svg, "cell"):
            assert el.attrib["fill"] in palette

    def test_theme_override(self, cooling):
        spec = RenderSpec(view="matrix", width=760, height=560,
                          theme={"green": "#123456"})
        svg = render_matrix(cooling, SIGMA, None, spec)
        fills = {el.attrib["fill"] for el in by_class(svg, "cell")}
        assert "#123456" in fills
        assert cooling.scale.color_of("green") not in fills

    def test_theme_unknown_grade_rejected(self, cooling):
        spec = RenderSpec(view="matrix", theme={"mauve": "#000000"})
        with pytest.raises(SchemaError):
            render_matrix(cooling, SIGMA, None, spec)

    def test_requires_risk(self):
        model = make_model([2, 2], default="g0")  # no risk position
        with pytest.raises(RenderError):
            render_matrix(model, {})
        svg = render_matrix(model, {}, RiskPosition(0, 0))
        assert len(by_class(svg, "cell")) == 4

    def test_labels_toggle(self, cooling):
        spec = RenderSpec(view="matrix", show_labels=False)
        svg = render_matrix(cooling, SIGMA, None, spec)
        assert by_class(svg, "row-label") == []
        svg_with = render_matrix(cooling, SIGMA)
        assert len(by_class(svg_with, "row-label")) == 5
        assert len(by_class(svg_with, "col-label")) == 5


class TestPolar:
    def test_structural_counts(self, cooling):
        svg = render_polar(cooling, SIGMA)
        assert len(by_class(svg, "segment")) == 17
        assert len(by_class(svg, "threshold-arc")) == 4
        assert len(by_class(svg, "risk-cross")) == 2
        assert len(by_class(svg, "context-dot")) == 2

    def test_three_axis_model(self):
        model = make_model([4, 4, 4], default="g0", n_grades=3)
        # context axes need a profile for ring coloring
        from dataclasses import replace

        axes = list(model.space.axes)
        axes[2] = replace(axes[2], profile=("g0", "g1", "g2", "g2"))
        model = replace(model, space=replace(model.space, axes=tuple(axes)))
        svg = render_polar(model, {"ax2": 0}, RiskPosition(0, 0))
        assert len(by_class(svg, "segment")) == 12
        assert len(by_class(svg, "context-dot")) == 1

    def test_missing_profile_instructs(self):
        model = make_model([2, 2, 2], default="g0")
        with pytest.raises(RenderError) as err:
            render_polar(model, {"ax2": 0}, RiskPosition(0, 0))
        assert "profile" in str(err.value)

    def test_byte_identical_output(self, cooling):
        assert render_polar(cooling, SIGMA) == render_polar(cooling, SIGMA)

    def test_rotation_changes_paths_keeps_counts(self, cooling):
        spec = RenderSpec(view="polar", theta0=0.0)
        spec_rot = RenderSpec(view="polar", theta0=math.pi)
        a = render_polar(cooling, SIGMA, None, spec)
        b = render_polar(cooling, SIGMA, None, spec_rot)
        assert a != b
        assert len(by_class(a, "segment")) == len(by_class(b, "segment"))
        assert len(by_class(a, "threshold-arc")) == len(by_class(b, "threshold-arc"))

    def test_rotation_equivariance_of_markers(self, cooling):
        # rotating by pi mirrors marker positions through the center
        w = h = 640
        cx = cy = w / 2.0
        spec = RenderSpec(view="polar", theta0=0.0, width=w, height=h)
        spec_rot = RenderSpec(view="polar", theta0=math.pi, width=w, height=h)
        a = render_polar(cooling, SIGMA, None, spec)
        b = render_polar(cooling, SIGMA, None, spec_rot)
        dots_a = by_class(a, "context-dot")
        dots_b = by_class(b, "context-dot")
        for da, db in zip(dots_a, dots_b):
            assert float(db.attrib["cx"]) == pytest.approx(
                2 * cx - float(da.attrib["cx"]), abs=1e-3
            )
            assert float(db.attrib["cy"]) == pytest.approx(
                2 * cy - float(da.attrib["cy"]), abs=1e-3
            )

    def test_fills_from_palette_or_theme(self, cooling):
        svg = render_polar(cooling, SIGMA)
        palette = {g.color for g in cooling.scale.grades}
        for el in by_class(svg, "segment"):
            assert el.attrib["fill"] in palette

    def test_primary_segment_colors_match_aggregates(self, cooling):
        from ndpolar.aggregate import aggregate_axes

        lik, imp = aggregate_axes(cooling, SIGMA, cooling.risk)
        svg = render_polar(cooling, SIGMA)
        segments = by_class(svg, "segment")
        for el in segments:
            axis = el.attrib["data-axis"]
            level = int(el.attrib["data-level"])
            if axis == "probability":
                assert el.attrib["fill"] == cooling.scale.color_of(
                    lik.per_level[level]
                )
            elif axis == "impact":
                assert el.attrib["fill"] == cooling.scale.color_of(
                    imp.per_level[level]
                )

    def test_context_segment_colors_match_profile(self, cooling):
        svg = render_polar(cooling, SIGMA)
        for el in by_class(svg, "segment"):
            axis_id = el.attrib["data-axis"]
            axis = cooling.space.axis(axis_id)
            if axis.profile is not None:
                level = int(el.attrib["data-level"])
                assert el.attrib["fill"] == cooling.scale.color_of(
                    axis.profile[level]
                )

    def test_float_precision_is_six(self, cooling):
        svg = render_polar(cooling, SIGMA)
        root = ET.fromstring(svg)
        seen = 0
        for el in root.iter():
            for attr in ("d", "x", "y", "cx", "cy", "r"):
                value = el.attrib.get(attr)
                if value is None:
                    continue
                for m in re.finditer(r"\d+\.(\d+)", value):
                    assert len(m.group(1)) == 6
                    seen += 1
        assert seen > 50

    def test_thresholds_toggle(self, cooling):
        spec = RenderSpec(view="polar", show_thresholds=False)
        svg = render_polar(cooling, SIGMA, None, spec)
        assert by_class(svg, "threshold-arc") == []

    def test_axis_labels_present(self, cooling):
        svg = render_polar(cooling, SIGMA)
        labels = {el.text for el in by_class(svg, "axis-label")}
        assert labels == {"probability", "impact", "cooling", "maintenance"}
