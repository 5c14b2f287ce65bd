"""Per-axis aggregation of a matrix slice and the single-axis context walk.

The primary axes of the polar view carry aggregated colors: for each level
the most frequent grade of the corresponding slice column/row, ties broken
towards the higher grade. The level holding the current risk position is
overridden with the risk cell's own grade.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import SliceError
from .model import GradeScale, MatrixSlice, RiskModel, RiskPosition, matrix_slice, violations


@dataclass(frozen=True)
class AxisAggregate:
    axis_id: str
    per_level: tuple[str, ...]


@dataclass(frozen=True)
class WalkStep:
    level: int
    label: str
    grid_digest: str
    risk_grade: str
    likelihood: AxisAggregate
    impact: AxisAggregate
    violation_count: int
    grid: tuple[tuple[str, ...], ...] | None = None


@dataclass(frozen=True)
class WalkResult:
    axis_id: str
    steps: tuple[WalkStep, ...]


def mode_with_tiebreak(scale: GradeScale, values: Iterable[str]) -> str:
    """Most frequent grade; among equally frequent ones, the highest ranked."""
    counts = Counter(values)
    if not counts:
        raise ValueError("cannot take the mode of an empty multiset")
    for g in counts:
        scale.rank_of(g)  # raises on grades outside the scale
    best = max(counts.items(), key=lambda kv: (kv[1], scale.rank_of(kv[0])))
    return best[0]


def grid_digest(grid: tuple[tuple[str, ...], ...]) -> str:
    """Stable content hash of a grade grid."""
    payload = ";".join(",".join(col) for col in grid)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def aggregate_slice(
    scale: GradeScale, grid_slice: MatrixSlice, risk: RiskPosition
) -> tuple[AxisAggregate, AxisAggregate]:
    """Aggregates for an already computed slice (likelihood, impact)."""
    lik_axis = grid_slice.likelihood_axis
    imp_axis = grid_slice.impact_axis
    r1 = lik_axis.level_of(risk.likelihood)
    r2 = imp_axis.level_of(risk.impact)
    risk_grade = grid_slice.cell(r1, r2)
    lik = tuple(
        risk_grade if l1 == r1 else mode_with_tiebreak(scale, grid_slice.column(l1))
        for l1 in range(lik_axis.n)
    )
    imp = tuple(
        risk_grade if l2 == r2 else mode_with_tiebreak(scale, grid_slice.row(l2))
        for l2 in range(imp_axis.n)
    )
    return (
        AxisAggregate(axis_id=lik_axis.id, per_level=lik),
        AxisAggregate(axis_id=imp_axis.id, per_level=imp),
    )


def aggregate_axes(
    model: RiskModel,
    sigma: Mapping[str, int | str],
    risk: RiskPosition,
) -> tuple[AxisAggregate, AxisAggregate]:
    """Aggregated per-level grades for the two primary axes of one slice."""
    return aggregate_slice(model.scale, matrix_slice(model, sigma), risk)


def walk(
    model: RiskModel,
    vary: str,
    fixed: Mapping[str, int | str],
    risk: RiskPosition,
    include_grids: bool = False,
) -> WalkResult:
    """Vary one context axis over all its levels, other context axes fixed.

    Each step records the slice digest, the risk-cell grade, both axis
    aggregates and the violation count at the induced full state.
    """
    axis = model.space.axis(vary)
    if axis not in model.space.context_axes:
        raise SliceError(f"axis {vary!r} is not a context axis", axis=vary)
    if vary in fixed:
        raise SliceError(
            f"axis {vary!r} cannot be both varied and fixed", axis=vary
        )
    r1 = model.space.likelihood.level_of(risk.likelihood)
    r2 = model.space.impact.level_of(risk.impact)
    steps = []
    for level in range(axis.n):
        sigma = dict(fixed)
        sigma[vary] = level
        grid_slice = matrix_slice(model, sigma)
        lik, imp = aggregate_slice(model.scale, grid_slice, risk)
        resolved = dict(grid_slice.sigma)
        state = (r1, r2) + tuple(
            resolved[ax.id] for ax in model.space.context_axes
        )
        _, total = violations(model, state)
        steps.append(
            WalkStep(
                level=level,
                label=axis.labels[level],
                grid_digest=grid_digest(grid_slice.grid),
                risk_grade=grid_slice.cell(r1, r2),
                likelihood=lik,
                impact=imp,
                violation_count=total,
                grid=grid_slice.grid if include_grids else None,
            )
        )
    return WalkResult(axis_id=vary, steps=tuple(steps))
