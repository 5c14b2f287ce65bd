"""Core domain model: grade scales, axes, state spaces and slicing.

A risk model maps every point of a finite multidimensional state space to a
grade from a totally ordered scale. The first axis is always the likelihood
axis, the second the impact axis; all further axes are context axes. Fixing
every context axis to a level selects a classical 2D likelihood-by-impact
matrix (a slice). All types are immutable; operations are pure functions.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Mapping, Sequence

from .errors import (
    EnumerationCapError,
    LevelRangeError,
    SchemaError,
    SliceError,
    UnknownAxisError,
    UnknownLabelError,
)

if TYPE_CHECKING:
    from .rules import CompiledAssignment

#: Upper bound on exhaustive state enumeration; overridable per call.
DEFAULT_STATE_CAP = 10**6

State = tuple[int, ...]


class AxisRole(enum.Enum):
    LIKELIHOOD = "likelihood"
    IMPACT = "impact"
    CONTEXT = "context"


@dataclass(frozen=True, slots=True)
class Grade:
    id: str
    rank: int
    color: str


@dataclass(frozen=True)
class GradeScale:
    """Finite, totally ordered set of risk grades.

    Ranks must be exactly 0..len-1 in increasing order; higher rank means
    higher risk.
    """

    grades: tuple[Grade, ...]
    _ranks: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.grades) < 2:
            raise SchemaError("a grade scale needs at least 2 grades")
        ranks = [g.rank for g in self.grades]
        if ranks != list(range(len(self.grades))):
            raise SchemaError(
                "grade ranks must be 0..n-1 in increasing order", ranks=ranks
            )
        ids = [g.id for g in self.grades]
        if len(set(ids)) != len(ids) or any(not i for i in ids):
            raise SchemaError("grade ids must be unique and non-empty", ids=ids)
        object.__setattr__(self, "_ranks", {g.id: g.rank for g in self.grades})

    def __contains__(self, grade_id: str) -> bool:
        return grade_id in self._ranks

    def ids(self) -> tuple[str, ...]:
        return tuple(g.id for g in self.grades)

    def rank_of(self, grade_id: str) -> int:
        try:
            return self._ranks[grade_id]
        except KeyError:
            from .errors import UnknownGradeError

            raise UnknownGradeError(
                f"unknown grade {grade_id!r}", grade=grade_id
            ) from None

    def color_of(self, grade_id: str) -> str:
        return self.grades[self.rank_of(grade_id)].color

    def max_of(self, a: str, b: str) -> str:
        return a if self.rank_of(a) >= self.rank_of(b) else b


@dataclass(frozen=True)
class Axis:
    """One named dimension with an ordered set of discrete levels.

    Levels are 0-based internally; ``labels[i]`` is the display name of
    level ``i`` and label order encodes increasing intensity. ``threshold``
    is the highest acceptable level; levels above it count as violations.
    ``profile`` optionally colors each level with a grade id (used for
    context-axis rings in the polar view).
    """

    id: str
    role: AxisRole
    labels: tuple[str, ...]
    threshold: int | None = None
    profile: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.id:
            raise SchemaError("axis id must be non-empty")
        if len(self.labels) < 2:
            raise SchemaError(
                f"axis {self.id!r} needs at least 2 levels", axis=self.id
            )
        if len(set(self.labels)) != len(self.labels):
            raise SchemaError(
                f"axis {self.id!r} has duplicate level labels", axis=self.id
            )
        if self.threshold is not None and not 0 <= self.threshold < self.n:
            raise SchemaError(
                f"axis {self.id!r} threshold {self.threshold} outside 0..{self.n - 1}",
                axis=self.id,
                threshold=self.threshold,
            )
        if self.profile is not None and len(self.profile) != self.n:
            raise SchemaError(
                f"axis {self.id!r} profile must have {self.n} entries",
                axis=self.id,
            )

    @property
    def n(self) -> int:
        return len(self.labels)

    def level_of(self, ref: int | str) -> int:
        """Resolve a level reference (index or label) to a level index."""
        if isinstance(ref, bool):
            raise LevelRangeError(f"axis {self.id!r}: bad level {ref!r}", axis=self.id)
        if isinstance(ref, int):
            if not 0 <= ref < self.n:
                raise LevelRangeError(
                    f"axis {self.id!r}: level {ref} outside 0..{self.n - 1}",
                    axis=self.id,
                    level=ref,
                )
            return ref
        try:
            return self.labels.index(ref)
        except ValueError:
            raise UnknownLabelError(
                f"axis {self.id!r}: unknown level label {ref!r}",
                axis=self.id,
                label=ref,
            ) from None


@dataclass(frozen=True)
class StateSpace:
    """Ordered axes forming a Cartesian product of levels.

    Axis 0 must be the likelihood axis and axis 1 the impact axis; any
    remaining axes are context axes in document order (their order fixes
    the polar sector assignment).
    """

    axes: tuple[Axis, ...]

    def __post_init__(self):
        if len(self.axes) < 2:
            raise SchemaError("a state space needs at least 2 axes")
        if self.axes[0].role is not AxisRole.LIKELIHOOD:
            raise SchemaError("first axis must have role 'likelihood'")
        if self.axes[1].role is not AxisRole.IMPACT:
            raise SchemaError("second axis must have role 'impact'")
        for ax in self.axes[2:]:
            if ax.role is not AxisRole.CONTEXT:
                raise SchemaError(
                    f"axis {ax.id!r}: only axes 1 and 2 may be likelihood/impact",
                    axis=ax.id,
                )
        ids = [ax.id for ax in self.axes]
        if len(set(ids)) != len(ids):
            raise SchemaError("axis ids must be unique", ids=ids)

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def likelihood(self) -> Axis:
        return self.axes[0]

    @property
    def impact(self) -> Axis:
        return self.axes[1]

    @property
    def context_axes(self) -> tuple[Axis, ...]:
        return self.axes[2:]

    def axis(self, axis_id: str) -> Axis:
        for ax in self.axes:
            if ax.id == axis_id:
                return ax
        raise UnknownAxisError(f"unknown axis {axis_id!r}", axis=axis_id)

    def index_of(self, axis_id: str) -> int:
        for i, ax in enumerate(self.axes):
            if ax.id == axis_id:
                return i
        raise UnknownAxisError(f"unknown axis {axis_id!r}", axis=axis_id)

    def size(self) -> int:
        n = 1
        for ax in self.axes:
            n *= ax.n
        return n

    def validate_state(self, state: Sequence[int]) -> State:
        if len(state) != self.d:
            raise LevelRangeError(
                f"state has {len(state)} components, expected {self.d}",
                state=tuple(state),
            )
        for ax, level in zip(self.axes, state):
            if not 0 <= level < ax.n:
                raise LevelRangeError(
                    f"axis {ax.id!r}: level {level} outside 0..{ax.n - 1}",
                    axis=ax.id,
                    level=level,
                )
        return tuple(state)

    def resolve_state(self, refs: Sequence[int | str]) -> State:
        """Resolve a sequence of level references (indices or labels)."""
        if len(refs) != self.d:
            raise LevelRangeError(
                f"state has {len(refs)} components, expected {self.d}",
                state=tuple(refs),
            )
        return tuple(ax.level_of(ref) for ax, ref in zip(self.axes, refs))


@dataclass(frozen=True, slots=True)
class RiskPosition:
    """The (likelihood, impact) cell currently under analysis."""

    likelihood: int
    impact: int


@dataclass(frozen=True)
class MatrixSlice:
    """A 2D likelihood-by-impact grade grid; ``grid[l1][l2]`` is a grade id."""

    likelihood_axis: Axis
    impact_axis: Axis
    sigma: tuple[tuple[str, int], ...]
    grid: tuple[tuple[str, ...], ...]

    def cell(self, l1: int, l2: int) -> str:
        return self.grid[l1][l2]

    def column(self, l1: int) -> tuple[str, ...]:
        """All grades with likelihood fixed at ``l1`` (one per impact level)."""
        return self.grid[l1]

    def row(self, l2: int) -> tuple[str, ...]:
        """All grades with impact fixed at ``l2`` (one per likelihood level)."""
        return tuple(self.grid[l1][l2] for l1 in range(self.likelihood_axis.n))

    def rows_impact_desc(self) -> list[tuple[str, ...]]:
        """Rows ordered top-down as drawn: highest impact first."""
        return [self.row(l2) for l2 in range(self.impact_axis.n - 1, -1, -1)]


@dataclass(frozen=True)
class RiskModel:
    """A named state space plus a total state-to-grade assignment."""

    name: str
    scale: GradeScale
    space: StateSpace
    assignment: "CompiledAssignment"
    risk: RiskPosition | None = None
    default_slice: tuple[tuple[str, int], ...] | None = None

    def __post_init__(self):
        if self.risk is not None:
            self.space.likelihood.level_of(self.risk.likelihood)
            self.space.impact.level_of(self.risk.impact)
        if self.default_slice is not None:
            resolve_slice(self.space, dict(self.default_slice))


def grade_of(model: RiskModel, state: Sequence[int]) -> str:
    """Grade assigned to one full state; deterministic and total."""
    valid = model.space.validate_state(state)
    return model.assignment.grade_of(valid)


def resolve_slice(space: StateSpace, sigma: Mapping[str, int | str]) -> dict[str, int]:
    """Check a slice selector covers exactly the context axes; resolve labels."""
    context_ids = [ax.id for ax in space.context_axes]
    unknown = [k for k in sigma if k not in context_ids]
    if unknown:
        raise SliceError(
            f"not a context axis: {', '.join(map(repr, sorted(unknown)))}",
            axes=sorted(unknown),
        )
    missing = [a for a in context_ids if a not in sigma]
    if missing:
        raise SliceError(
            f"slice selector missing context axes: {', '.join(map(repr, missing))}",
            axes=missing,
        )
    return {a: space.axis(a).level_of(sigma[a]) for a in context_ids}


def matrix_slice(model: RiskModel, sigma: Mapping[str, int | str]) -> MatrixSlice:
    """Fix all context axes to ``sigma`` and return the 2D grade grid.

    For a 2D model the empty selector returns the full map (the classical
    risk matrix).
    """
    space = model.space
    resolved = resolve_slice(space, sigma)
    suffix = tuple(resolved[ax.id] for ax in space.context_axes)
    grid = tuple(
        tuple(
            model.assignment.grade_of((l1, l2) + suffix)
            for l2 in range(space.impact.n)
        )
        for l1 in range(space.likelihood.n)
    )
    return MatrixSlice(
        likelihood_axis=space.likelihood,
        impact_axis=space.impact,
        sigma=tuple((ax.id, resolved[ax.id]) for ax in space.context_axes),
        grid=grid,
    )


def violations(model: RiskModel, state: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Per-axis threshold violation bits and their sum.

    An axis without a threshold never counts as violated.
    """
    valid = model.space.validate_state(state)
    bits = tuple(
        1 if ax.threshold is not None and level > ax.threshold else 0
        for ax, level in zip(model.space.axes, valid)
    )
    return bits, sum(bits)


def enumerate_states(
    space: StateSpace, max_states: int = DEFAULT_STATE_CAP
) -> Iterator[State]:
    """Yield every state in lexicographic order.

    Refuses to run when the space exceeds ``max_states``; callers that hit
    the cap should validate without a full table (e.g. require a default
    grade instead of enumerating).
    """
    total = space.size()
    if total > max_states:
        raise EnumerationCapError(
            f"state space has {total} states, above the cap of {max_states}; "
            "raise the cap or validate without enumeration",
            size=total,
            cap=max_states,
        )
    return iter(itertools.product(*(range(ax.n) for ax in space.axes)))


def iter_slices(space: StateSpace) -> Iterator[dict[str, int]]:
    """Yield every slice selector (all context-level combinations)."""
    context = space.context_axes
    for combo in itertools.product(*(range(ax.n) for ax in context)):
        yield {ax.id: lvl for ax, lvl in zip(context, combo)}


def parse_axis_role(value: str) -> AxisRole:
    try:
        return AxisRole(value)
    except ValueError:
        raise SchemaError(
            f"axis role must be likelihood, impact or context, got {value!r}",
            role=value,
        ) from None
