"""Multidimensional polar risk heatmaps.

A risk model is a finite state space (likelihood, impact and any number of
context axes), a totally ordered grade scale, and a total mapping from
states to grades. This package provides slicing into classical 2D matrices,
threshold-violation counting, per-axis aggregation, a rule DSL for defining
the mapping, polar-disk geometry, deterministic SVG rendering, a CLI and a
small HTTP service.
"""

from importlib import resources

from .aggregate import (
    AxisAggregate,
    WalkResult,
    WalkStep,
    aggregate_axes,
    mode_with_tiebreak,
    walk,
)
from .document import dumps_model, load_model, model_to_document, save_model
from .errors import ModelError
from .geometry import PolarLayout, hit_test, layout, locate
from .model import (
    Axis,
    AxisRole,
    Grade,
    GradeScale,
    MatrixSlice,
    RiskModel,
    RiskPosition,
    StateSpace,
    enumerate_states,
    grade_of,
    matrix_slice,
    violations,
)
from .render import RenderSpec, render_matrix, render_polar
from .rules import (
    Assignment,
    CompiledAssignment,
    Rule,
    compile_assignment,
    lint_monotone,
    lint_rules,
    parse_rules,
    print_rules,
)

__version__ = "0.1.0"


def fixture_path(name: str) -> str:
    """Filesystem path of a bundled example model (e.g. ``cooling``)."""
    res = resources.files(__package__) / "fixtures" / f"{name}.ndpolar.json"
    if not res.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return str(res)
