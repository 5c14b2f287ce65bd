"""Model-document persistence (JSON syntax, format tag ``ndpolar/1``).

Documents accept level labels anywhere a level index is expected; loading
resolves them, and saving always emits the canonical form: sorted keys,
indices instead of labels, rules as canonical DSL text.
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path
from typing import Any, Mapping

from .errors import SchemaError, UnknownGradeError
from .model import (
    Axis,
    Grade,
    GradeScale,
    RiskModel,
    RiskPosition,
    StateSpace,
    parse_axis_role,
    resolve_slice,
)
from .rules import (
    Assignment,
    Clause,
    Rule,
    compile_assignment,
    parse_rules,
    print_rules,
)

FORMAT = "ndpolar/1"

_COLOR_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")


def _require(doc: Mapping[str, Any], key: str, kind: type, where: str) -> Any:
    if key not in doc:
        raise SchemaError(f"{where}: missing required key {key!r}", key=key)
    value = doc[key]
    if not isinstance(value, kind):
        raise SchemaError(
            f"{where}: {key!r} must be {kind.__name__}, got {type(value).__name__}",
            key=key,
        )
    return value


def load_model(source: str | Path | Mapping[str, Any]) -> RiskModel:
    """Load and fully validate a model from a path, JSON text or mapping."""
    if isinstance(source, Mapping):
        return model_from_document(source)
    if isinstance(source, Path) or (
        isinstance(source, str) and not source.lstrip().startswith("{")
    ):
        if not os.path.exists(source):
            raise SchemaError(f"no such model document: {source}", path=str(source))
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", position=exc.pos) from None
    return model_from_document(doc)


def model_from_document(doc: Mapping[str, Any]) -> RiskModel:
    if not isinstance(doc, Mapping):
        raise SchemaError("model document must be a JSON object")
    fmt = _require(doc, "format", str, "document")
    if fmt != FORMAT:
        raise SchemaError(
            f"unsupported format {fmt!r}, expected {FORMAT!r}", format=fmt
        )
    name = _require(doc, "name", str, "document")

    scale = _parse_grades(_require(doc, "grades", list, "document"))
    space = _parse_axes(_require(doc, "axes", list, "document"), scale)
    raw = _parse_assignment(_require(doc, "assignment", Mapping, "document"), space, scale)
    assignment = compile_assignment(space, scale, raw)

    risk = None
    if doc.get("risk") is not None:
        rdoc = _require(doc, "risk", Mapping, "document")
        risk = RiskPosition(
            likelihood=space.likelihood.level_of(_level_ref(rdoc, "likelihood")),
            impact=space.impact.level_of(_level_ref(rdoc, "impact")),
        )

    default_slice = None
    if doc.get("default_slice") is not None:
        sdoc = _require(doc, "default_slice", Mapping, "document")
        resolved = resolve_slice(space, sdoc)
        default_slice = tuple(
            (ax.id, resolved[ax.id]) for ax in space.context_axes
        )

    return RiskModel(
        name=name,
        scale=scale,
        space=space,
        assignment=assignment,
        risk=risk,
        default_slice=default_slice,
    )


def _level_ref(doc: Mapping[str, Any], key: str) -> int | str:
    if key not in doc:
        raise SchemaError(f"risk: missing key {key!r}", key=key)
    value = doc[key]
    if not isinstance(value, (int, str)) or isinstance(value, bool):
        raise SchemaError(f"risk: {key!r} must be a level index or label", key=key)
    return value


def _parse_grades(items: list[Any]) -> GradeScale:
    grades = []
    for i, item in enumerate(items):
        if not isinstance(item, Mapping):
            raise SchemaError(f"grades[{i}] must be an object")
        gid = _require(item, "id", str, f"grades[{i}]")
        rank = _require(item, "rank", int, f"grades[{i}]")
        color = _require(item, "color", str, f"grades[{i}]")
        if not _COLOR_RE.match(color):
            raise SchemaError(
                f"grades[{i}]: color {color!r} is not a #RRGGBB value",
                grade=gid,
                color=color,
            )
        grades.append(Grade(id=gid, rank=rank, color=color))
    return GradeScale(grades=tuple(grades))


def _parse_axes(items: list[Any], scale: GradeScale) -> StateSpace:
    axes = []
    for i, item in enumerate(items):
        if not isinstance(item, Mapping):
            raise SchemaError(f"axes[{i}] must be an object")
        aid = _require(item, "id", str, f"axes[{i}]")
        role = parse_axis_role(_require(item, "role", str, f"axes[{i}]"))
        labels = _require(item, "labels", list, f"axes[{i}]")
        if not all(isinstance(l, str) for l in labels):
            raise SchemaError(f"axes[{i}]: labels must be strings", axis=aid)
        threshold = item.get("threshold")
        profile = item.get("profile")
        if profile is not None:
            if not isinstance(profile, list) or not all(
                isinstance(p, str) for p in profile
            ):
                raise SchemaError(f"axes[{i}]: profile must be a list of grade ids",
                                  axis=aid)
            for p in profile:
                if p not in scale:
                    raise UnknownGradeError(
                        f"axis {aid!r} profile uses unknown grade {p!r}",
                        axis=aid,
                        grade=p,
                    )
            profile = tuple(profile)
        if threshold is not None:
            if not isinstance(threshold, (int, str)) or isinstance(threshold, bool):
                raise SchemaError(
                    f"axes[{i}]: threshold must be a level index or label",
                    axis=aid,
                )
            threshold = Axis(id=aid, role=role, labels=tuple(labels)).level_of(
                threshold
            )
        axes.append(
            Axis(
                id=aid,
                role=role,
                labels=tuple(labels),
                threshold=threshold,
                profile=profile,
            )
        )
    return StateSpace(axes=tuple(axes))


def _parse_assignment(
    doc: Mapping[str, Any], space: StateSpace, scale: GradeScale
) -> Assignment:
    entries = []
    for i, item in enumerate(doc.get("entries") or []):
        if not isinstance(item, Mapping):
            raise SchemaError(f"assignment.entries[{i}] must be an object")
        state_refs = _require(item, "state", list, f"assignment.entries[{i}]")
        grade = _require(item, "grade", str, f"assignment.entries[{i}]")
        entries.append((space.resolve_state(state_refs), grade))

    rules_doc = doc.get("rules")
    if rules_doc is None:
        rules: tuple[Rule, ...] = ()
    elif isinstance(rules_doc, str):
        rules = tuple(parse_rules(rules_doc, space, scale))
    elif isinstance(rules_doc, list):
        rules = tuple(
            _structured_rule(item, i, space, scale)
            for i, item in enumerate(rules_doc)
        )
    else:
        raise SchemaError("assignment.rules must be DSL text or a list of rules")

    default = doc.get("default")
    if default is not None and not isinstance(default, str):
        raise SchemaError("assignment.default must be a grade id")
    return Assignment(entries=tuple(entries), rules=rules, default=default)


def _structured_rule(
    item: Any, index: int, space: StateSpace, scale: GradeScale
) -> Rule:
    where = f"assignment.rules[{index}]"
    if not isinstance(item, Mapping):
        raise SchemaError(f"{where} must be an object")
    when = _require(item, "when", list, where)
    grade = _require(item, "then", str, where)
    if grade not in scale:
        raise UnknownGradeError(f"{where}: unknown grade {grade!r}", grade=grade)
    clauses = []
    for j, cdoc in enumerate(when):
        if not isinstance(cdoc, Mapping):
            raise SchemaError(f"{where}.when[{j}] must be an object")
        axis_id = _require(cdoc, "axis", str, f"{where}.when[{j}]")
        op = _require(cdoc, "op", str, f"{where}.when[{j}]")
        if op not in ("==", "!=", "<", "<=", ">", ">="):
            raise SchemaError(f"{where}.when[{j}]: unknown comparator {op!r}")
        ref = cdoc.get("level")
        if not isinstance(ref, (int, str)) or isinstance(ref, bool):
            raise SchemaError(f"{where}.when[{j}]: level must be index or label")
        axis_index = space.index_of(axis_id)
        level = space.axes[axis_index].level_of(ref)
        clauses.append(
            Clause(axis=axis_id, op=op, level=level, ref=ref, axis_index=axis_index)
        )
    if len({c.axis for c in clauses}) != len(clauses):
        raise SchemaError(f"{where}: at most one clause per axis")
    return Rule(clauses=tuple(clauses), grade=grade, source_span=(index + 1, 1))


def model_to_document(model: RiskModel) -> dict[str, Any]:
    """Canonical document: indices not labels, entries sorted, rules as DSL."""
    doc: dict[str, Any] = {
        "format": FORMAT,
        "name": model.name,
        "grades": [
            {"id": g.id, "rank": g.rank, "color": g.color}
            for g in model.scale.grades
        ],
        "axes": [],
        "assignment": {},
    }
    for axis in model.space.axes:
        adoc: dict[str, Any] = {
            "id": axis.id,
            "role": axis.role.value,
            "labels": list(axis.labels),
        }
        if axis.threshold is not None:
            adoc["threshold"] = axis.threshold
        if axis.profile is not None:
            adoc["profile"] = list(axis.profile)
        doc["axes"].append(adoc)

    raw = model.assignment.raw
    if raw.entries:
        doc["assignment"]["entries"] = [
            {"state": list(state), "grade": grade}
            for state, grade in sorted(raw.entries)
        ]
    if raw.rules:
        doc["assignment"]["rules"] = print_rules(
            _canonical_rules(raw.rules)
        )
    if raw.default is not None:
        doc["assignment"]["default"] = raw.default

    if model.risk is not None:
        doc["risk"] = {
            "likelihood": model.risk.likelihood,
            "impact": model.risk.impact,
        }
    if model.default_slice is not None:
        doc["default_slice"] = {a: lvl for a, lvl in model.default_slice}
    return doc


def _canonical_rules(rules: tuple[Rule, ...]) -> list[Rule]:
    out = []
    for rule in rules:
        out.append(
            Rule(
                clauses=tuple(
                    Clause(
                        axis=c.axis,
                        op=c.op,
                        level=c.level,
                        ref=c.level,
                        axis_index=c.axis_index,
                    )
                    for c in rule.clauses
                ),
                grade=rule.grade,
                source_span=rule.source_span,
            )
        )
    return out


def save_model(model: RiskModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def dumps_model(model: RiskModel) -> str:
    return json.dumps(model_to_document(model), sort_keys=True, indent=2) + "\n"
