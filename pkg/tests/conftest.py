from __future__ import annotations

import pytest
from hypothesis import strategies as st

import ndpolar as nd
from ndpolar.model import Axis, AxisRole, Grade, GradeScale, StateSpace
from ndpolar.rules import Assignment, compile_assignment


@pytest.fixture(scope="session")
def cooling():
    return nd.load_model(nd.fixture_path("cooling"))


@pytest.fixture(scope="session")
def basic2d():
    return nd.load_model(nd.fixture_path("basic2d"))


def make_scale(n: int) -> GradeScale:
    names = ["g0", "g1", "g2", "g3", "g4", "g5"][:n]
    palette = ["#10C010", "#A0F000", "#F1F159", "#F5AA00", "#EB0000", "#800000"]
    return GradeScale(
        grades=tuple(Grade(id=nm, rank=i, color=palette[i])
                     for i, nm in enumerate(names))
    )


def make_axes(sizes: list[int], thresholds: list[int | None] | None = None):
    roles = [AxisRole.LIKELIHOOD, AxisRole.IMPACT] + [AxisRole.CONTEXT] * (
        len(sizes) - 2
    )
    thresholds = thresholds or [None] * len(sizes)
    return tuple(
        Axis(
            id=f"ax{i}",
            role=roles[i],
            labels=tuple(f"ax{i}L{j}" for j in range(n)),
            threshold=thresholds[i],
        )
        for i, n in enumerate(sizes)
    )


def make_model(
    sizes: list[int],
    grades_by_state: dict[tuple[int, ...], str] | None = None,
    default: str | None = None,
    n_grades: int = 3,
    thresholds: list[int | None] | None = None,
    name: str = "test model",
) -> nd.RiskModel:
    """Small in-memory model from an explicit state->grade table."""
    scale = make_scale(n_grades)
    space = StateSpace(axes=make_axes(sizes, thresholds))
    entries = tuple((s, g) for s, g in (grades_by_state or {}).items())
    assignment = compile_assignment(
        space, scale, Assignment(entries=entries, default=default)
    )
    return nd.RiskModel(
        name=name, scale=scale, space=space, assignment=assignment
    )


# --- hypothesis strategies ---------------------------------------------------


@st.composite
def small_models(draw, min_d=2, max_d=4, max_levels=4, with_thresholds=False):
    d = draw(st.integers(min_value=min_d, max_value=max_d))
    sizes = [draw(st.integers(min_value=2, max_value=max_levels)) for _ in range(d)]
    n_grades = draw(st.integers(min_value=2, max_value=5))
    scale = make_scale(n_grades)
    thresholds = None
    if with_thresholds:
        thresholds = [
            draw(
                st.one_of(
                    st.none(), st.integers(min_value=0, max_value=sizes[i] - 1)
                )
            )
            for i in range(d)
        ]
    space = StateSpace(axes=make_axes(sizes, thresholds))
    ids = scale.ids()
    entries = {}
    for state in nd.enumerate_states(space):
        entries[state] = ids[draw(st.integers(min_value=0, max_value=n_grades - 1))]
    assignment = compile_assignment(
        space, scale, Assignment(entries=tuple(entries.items()))
    )
    return nd.RiskModel(
        name="generated", scale=scale, space=space, assignment=assignment
    )


@st.composite
def models_with_state(draw, **kwargs):
    model = draw(small_models(**kwargs))
    state = tuple(
        draw(st.integers(min_value=0, max_value=ax.n - 1))
        for ax in model.space.axes
    )
    return model, state


# --- acceptance summary ------------------------------------------------------


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[str, str] = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" in nodeid and getattr(rep, "when", "call") == "call":
                outcomes[nodeid.split("::")[-1]] = status
    if outcomes:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name in sorted(outcomes):
            mark = "PASS" if outcomes[name] == "passed" else "FAIL"
            terminalreporter.write_line(f"  {mark}  {name}")
