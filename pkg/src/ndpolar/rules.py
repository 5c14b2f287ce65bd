"""Declarative grade assignment: explicit cell entries plus a small rule DSL.

Rule syntax, one rule per ``when .. then ..;`` statement::

    # comments run to end of line
    when maintenance == "overdue" and probability >= "High" then red;
    when cooling >= 2 then orange;

A clause compares one axis against a level, written either as a 0-based
integer index or as a quoted level label. ``==`` and ``!=`` compare level
indices; the ordering comparators use the axis's intrinsic level order.
Resolution order over the state space: explicit entry, then the first
matching rule in source order, then the default grade.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConflictError,
    DslError,
    NotTotalError,
    UnknownAxisError,
    UnknownGradeError,
)
from .model import (
    DEFAULT_STATE_CAP,
    GradeScale,
    State,
    StateSpace,
    enumerate_states,
)

COMPARATORS = ("==", "!=", "<=", ">=", "<", ">")


@dataclass(frozen=True)
class Clause:
    """One ``axis CMP level`` comparison inside a rule."""

    axis: str
    op: str
    level: int
    # original reference form (int index or str label), kept for printing
    ref: int | str = field(compare=False)
    axis_index: int = field(compare=False)

    def holds(self, state: Sequence[int]) -> bool:
        value = state[self.axis_index]
        if self.op == "==":
            return value == self.level
        if self.op == "!=":
            return value != self.level
        if self.op == "<":
            return value < self.level
        if self.op == "<=":
            return value <= self.level
        if self.op == ">":
            return value > self.level
        return value >= self.level

    def matching_levels(self, n: int) -> range:
        """Levels of an n-level axis satisfying this clause (``!=`` excluded)."""
        if self.op == "==":
            return range(self.level, self.level + 1)
        if self.op == "<":
            return range(0, min(self.level, n))
        if self.op == "<=":
            return range(0, min(self.level + 1, n))
        if self.op == ">":
            return range(self.level + 1, n)
        if self.op == ">=":
            return range(self.level, n)
        raise ValueError(f"no contiguous range for {self.op}")


@dataclass(frozen=True)
class Rule:
    clauses: tuple[Clause, ...]
    grade: str
    source_span: tuple[int, int] = field(compare=False, default=(0, 0))

    def matches(self, state: Sequence[int]) -> bool:
        return all(c.holds(state) for c in self.clauses)


@dataclass(frozen=True)
class Assignment:
    """Raw assignment as authored: entries, ordered rules, optional default."""

    entries: tuple[tuple[State, str], ...] = ()
    rules: tuple[Rule, ...] = ()
    default: str | None = None


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    rule_index: int | None = None


# --- lexer -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<comment>\#[^\n]*)
  | (?P<ws>\s+)
  | (?P<cmp><=|>=|==|!=|<|>)
  | (?P<semi>;)
  | (?P<int>\d+)
  | (?P<string>"(?:\\.|[^"\\])*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_-]*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"when", "and", "then"}


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # cmp | semi | int | string | ident | keyword | end
    text: str
    line: int
    column: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup or ""
        raw = m.group()
        if kind not in ("ws", "comment"):
            if kind == "ident" and raw in _KEYWORDS:
                kind = "keyword"
            tokens.append(_Token(kind, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    tokens.append(_Token("end", "", line, col))
    return tokens


def _unquote(raw: str) -> str:
    return re.sub(r"\\(.)", r"\1", raw[1:-1])


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


class _Parser:
    def __init__(self, tokens: list[_Token], space: StateSpace, scale: GradeScale):
        self.tokens = tokens
        self.pos = 0
        self.space = space
        self.scale = scale

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            got = tok.text or "end of input"
            raise DslError(f"expected {want!r}, got {got!r}", tok.line, tok.column)
        return self.next()

    def parse_ruleset(self) -> list[Rule]:
        rules = []
        while self.peek().kind != "end":
            rules.append(self.parse_rule())
        return rules

    def parse_rule(self) -> Rule:
        start = self.expect("keyword", "when")
        clauses = [self.parse_clause()]
        while self.peek().kind == "keyword" and self.peek().text == "and":
            self.next()
            clauses.append(self.parse_clause())
        self.expect("keyword", "then")
        grade_tok = self.peek()
        if grade_tok.kind != "ident":
            raise DslError(
                f"expected a grade id, got {grade_tok.text or 'end of input'!r}",
                grade_tok.line,
                grade_tok.column,
            )
        self.next()
        if grade_tok.text not in self.scale:
            raise UnknownGradeError(
                f"unknown grade {grade_tok.text!r}",
                grade=grade_tok.text,
                line=grade_tok.line,
                column=grade_tok.column,
            )
        self.expect("semi")
        seen_axes = {c.axis for c in clauses}
        if len(seen_axes) != len(clauses):
            raise DslError(
                "a rule may use each axis at most once", start.line, start.column
            )
        return Rule(
            clauses=tuple(clauses),
            grade=grade_tok.text,
            source_span=(start.line, start.column),
        )

    def parse_clause(self) -> Clause:
        axis_tok = self.peek()
        if axis_tok.kind != "ident":
            raise DslError(
                f"expected an axis id, got {axis_tok.text or 'end of input'!r}",
                axis_tok.line,
                axis_tok.column,
            )
        self.next()
        try:
            axis_index = self.space.index_of(axis_tok.text)
        except UnknownAxisError:
            raise UnknownAxisError(
                f"unknown axis {axis_tok.text!r}",
                axis=axis_tok.text,
                line=axis_tok.line,
                column=axis_tok.column,
            ) from None
        axis = self.space.axes[axis_index]
        op = self.expect("cmp").text
        ref_tok = self.peek()
        if ref_tok.kind == "int":
            ref: int | str = int(ref_tok.text)
        elif ref_tok.kind == "string":
            ref = _unquote(ref_tok.text)
        else:
            raise DslError(
                f"expected a level index or quoted label, got "
                f"{ref_tok.text or 'end of input'!r}",
                ref_tok.line,
                ref_tok.column,
            )
        self.next()
        try:
            level = axis.level_of(ref)
        except Exception as exc:
            from .errors import ModelError

            if isinstance(exc, ModelError):
                exc.details.setdefault("line", ref_tok.line)
                exc.details.setdefault("column", ref_tok.column)
            raise
        return Clause(
            axis=axis.id, op=op, level=level, ref=ref, axis_index=axis_index
        )


def parse_rules(text: str, space: StateSpace, scale: GradeScale) -> list[Rule]:
    """Parse rule-DSL source and resolve every reference against the model."""
    return _Parser(_lex(text), space, scale).parse_ruleset()


def print_rules(rules: Iterable[Rule]) -> str:
    """Pretty-print rules; re-parsing the output yields structurally equal rules."""
    lines = []
    for rule in rules:
        parts = []
        for c in rule.clauses:
            ref = str(c.ref) if isinstance(c.ref, int) else _quote(c.ref)
            parts.append(f"{c.axis} {c.op} {ref}")
        lines.append(f"when {' and '.join(parts)} then {rule.grade};")
    return "\n".join(lines) + ("\n" if lines else "")


# --- compilation -----------------------------------------------------------


@dataclass(frozen=True)
class CompiledAssignment:
    """Totality-checked evaluator over a state space."""

    space: StateSpace
    raw: Assignment
    _entries: Mapping[State, str]

    def grade_of(self, state: State) -> str:
        grade = self._lookup(state)
        if grade is None:
            raise NotTotalError(
                f"no grade assigned to state {state}", states=[state]
            )
        return grade

    def source_of(self, state: State) -> str:
        """Which layer covers the state: 'entry', 'rule #k' (1-based) or 'default'."""
        if state in self._entries:
            return "entry"
        for k, rule in enumerate(self.raw.rules, start=1):
            if rule.matches(state):
                return f"rule #{k}"
        if self.raw.default is not None:
            return "default"
        raise NotTotalError(f"no grade assigned to state {state}", states=[state])

    def _lookup(self, state: State) -> str | None:
        grade = self._entries.get(state)
        if grade is not None:
            return grade
        for rule in self.raw.rules:
            if rule.matches(state):
                return rule.grade
        return self.raw.default


def compile_assignment(
    space: StateSpace,
    scale: GradeScale,
    assignment: Assignment,
    max_states: int = DEFAULT_STATE_CAP,
) -> CompiledAssignment:
    """Resolve entries and verify the assignment covers the whole space.

    Totality is checked by full enumeration when the space fits under
    ``max_states``; larger spaces must declare a default grade.
    """
    entries: dict[State, str] = {}
    for state, grade in assignment.entries:
        valid = space.validate_state(state)
        if grade not in scale:
            raise UnknownGradeError(
                f"entry for state {valid} uses unknown grade {grade!r}", grade=grade
            )
        prior = entries.get(valid)
        if prior is not None and prior != grade:
            raise ConflictError(
                f"state {valid} assigned both {prior!r} and {grade!r}",
                state=valid,
                grades=[prior, grade],
            )
        entries[valid] = grade
    for rule in assignment.rules:
        if rule.grade not in scale:
            raise UnknownGradeError(
                f"rule uses unknown grade {rule.grade!r}", grade=rule.grade
            )
    if assignment.default is not None and assignment.default not in scale:
        raise UnknownGradeError(
            f"default uses unknown grade {assignment.default!r}",
            grade=assignment.default,
        )

    compiled = CompiledAssignment(space=space, raw=assignment, _entries=entries)
    if assignment.default is None:
        if space.size() > max_states:
            raise NotTotalError(
                f"state space has {space.size()} states, above the enumeration "
                f"cap of {max_states}; a default grade is required",
                size=space.size(),
            )
        uncovered = []
        for state in enumerate_states(space, max_states):
            if compiled._lookup(state) is None:
                uncovered.append(state)
                if len(uncovered) == 10:
                    break
        if uncovered:
            raise NotTotalError(
                "assignment is not total; uncovered states (up to 10): "
                + ", ".join(map(str, uncovered)),
                states=uncovered,
            )
    return compiled


def lint_rules(
    assignment: Assignment,
    space: StateSpace,
    max_states: int = DEFAULT_STATE_CAP,
) -> list[Diagnostic]:
    """Static diagnostics: conflicting entries, zero-match and shadowed rules."""
    diags: list[Diagnostic] = []

    seen: dict[State, str] = {}
    for state, grade in assignment.entries:
        valid = space.validate_state(state)
        prior = seen.get(valid)
        if prior is not None and prior != grade:
            diags.append(
                Diagnostic(
                    severity="error",
                    code="E_CONFLICT",
                    message=f"state {valid} assigned both {prior!r} and {grade!r}",
                )
            )
        seen.setdefault(valid, grade)

    # Zero-match is decidable per axis: empty satisfying set on any axis
    # empties the whole conjunction.
    zero_match = set()
    for k, rule in enumerate(assignment.rules):
        for clause in rule.clauses:
            n = space.axes[clause.axis_index].n
            if clause.op == "!=":
                empty = n == 1
            else:
                empty = len(clause.matching_levels(n)) == 0
            if empty:
                zero_match.add(k)
                diags.append(
                    Diagnostic(
                        severity="warning",
                        code="W_ZERO_MATCH",
                        message=f"rule #{k + 1} matches no state "
                        f"(clause on {clause.axis!r} is unsatisfiable)",
                        rule_index=k,
                    )
                )
                break

    # Shadowing needs enumeration; skip silently above the cap. A rule with
    # a non-empty match set that never wins first-match is unreachable.
    if assignment.rules and space.size() <= max_states:
        wins = [False] * len(assignment.rules)
        for state in enumerate_states(space, max_states):
            for k, rule in enumerate(assignment.rules):
                if rule.matches(state):
                    wins[k] = True
                    break
        for k in range(len(assignment.rules)):
            if wins[k] or k in zero_match:
                continue
            diags.append(
                Diagnostic(
                    severity="warning",
                    code="W_UNREACHABLE",
                    message=f"rule #{k + 1} is shadowed by earlier rules",
                    rule_index=k,
                )
            )
    return diags


def lint_monotone(model, max_states: int = DEFAULT_STATE_CAP) -> list[Diagnostic]:
    """Optional check: grades should not drop along rising primary levels.

    Non-monotone rows/columns are legal (nothing constrains the mapping),
    so this only ever produces warnings. Skipped above the enumeration cap.
    """
    from .model import iter_slices, matrix_slice

    space = model.space
    if space.size() > max_states:
        return []
    diags: list[Diagnostic] = []
    rank = model.scale.rank_of
    for sigma in iter_slices(space):
        grid_slice = matrix_slice(model, sigma)
        where = ", ".join(f"{a}={v}" for a, v in grid_slice.sigma) or "the 2D map"
        for l1 in range(space.likelihood.n):
            ranks = [rank(g) for g in grid_slice.column(l1)]
            if any(a > b for a, b in zip(ranks, ranks[1:])):
                diags.append(
                    Diagnostic(
                        severity="warning",
                        code="W_NON_MONOTONE",
                        message=f"slice {where}: grades drop along rising "
                        f"{space.impact.id!r} at {space.likelihood.id!r} "
                        f"level {l1}",
                    )
                )
        for l2 in range(space.impact.n):
            ranks = [rank(g) for g in grid_slice.row(l2)]
            if any(a > b for a, b in zip(ranks, ranks[1:])):
                diags.append(
                    Diagnostic(
                        severity="warning",
                        code="W_NON_MONOTONE",
                        message=f"slice {where}: grades drop along rising "
                        f"{space.likelihood.id!r} at {space.impact.id!r} "
                        f"level {l2}",
                    )
                )
    return diags
