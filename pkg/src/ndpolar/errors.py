"""Error hierarchy with machine-readable codes.

Every error carries a stable ``code`` string so callers (CLI, HTTP service)
can map failures to exit codes / status codes without parsing messages.
"""

from __future__ import annotations

from typing import Any


class ModelError(Exception):
    """Base class for all model, parsing and rendering errors."""

    code = "E_MODEL"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


class SchemaError(ModelError):
    """Document does not conform to the model-document schema."""

    code = "E_SCHEMA"


class UnknownAxisError(ModelError):
    code = "E_UNKNOWN_AXIS"


class UnknownGradeError(ModelError):
    code = "E_UNKNOWN_GRADE"


class UnknownLabelError(ModelError):
    code = "E_UNKNOWN_LABEL"


class LevelRangeError(ModelError):
    """A level index is outside [0, n_i - 1] for its axis."""

    code = "E_RANGE"


class SliceError(ModelError):
    """Slice selector is missing a context axis or names a non-context axis."""

    code = "E_SLICE"


class NotTotalError(ModelError):
    """Assignment leaves states without a grade (up to 10 examples attached)."""

    code = "E_NOT_TOTAL"


class ConflictError(ModelError):
    """Two explicit entries assign different grades to the same state."""

    code = "E_CONFLICT"


class EnumerationCapError(ModelError):
    """State space exceeds the enumeration cap."""

    code = "E_CAP"


class DslError(ModelError):
    """Lexical, syntax or resolution error in rule-DSL source."""

    code = "E_DSL"

    def __init__(self, message: str, line: int, column: int, **details: Any):
        super().__init__(message, line=line, column=column, **details)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class RenderError(ModelError):
    code = "E_RENDER"
