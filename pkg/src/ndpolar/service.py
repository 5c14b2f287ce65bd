"""HTTP API over one risk model with atomic hot replacement.

The service holds an immutable model snapshot plus a revision counter.
Read endpoints are pure functions of (snapshot, query) and every response
carries the revision it was computed against; PUT /api/model swaps the
snapshot atomically, so in-flight readers keep their snapshot and never
observe a half-replaced model.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Any, Mapping

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .aggregate import aggregate_slice, walk
from .document import model_from_document, model_to_document
from .errors import (
    LevelRangeError,
    ModelError,
    UnknownAxisError,
    UnknownGradeError,
    UnknownLabelError,
)
from .geometry import layout
from .model import AxisRole, RiskModel, RiskPosition, matrix_slice, violations
from .render import DEFAULT_THETA0, RenderSpec, render_matrix, render_polar

_RESERVED_PARAMS = {"risk", "vary", "state", "theta0", "view", "format"}


@dataclass(frozen=True)
class Snapshot:
    model: RiskModel
    document: dict[str, Any]
    revision: int


class ApiSession:
    """Current model snapshot; replacement is atomic and bumps the revision."""

    def __init__(self, model: RiskModel):
        self._lock = threading.Lock()
        self._snapshot = Snapshot(model, model_to_document(model), 1)

    def current(self) -> Snapshot:
        with self._lock:
            return self._snapshot

    def replace(self, document: Mapping[str, Any]) -> Snapshot:
        model = model_from_document(document)  # full validation outside the lock
        with self._lock:
            snap = Snapshot(model, model_to_document(model), self._snapshot.revision + 1)
            self._snapshot = snap
            return snap


class _HttpError(Exception):
    def __init__(self, status: int, error: ModelError | dict):
        self.status = status
        self.body = error.to_dict() if isinstance(error, ModelError) else error


def _bad(message: str, **details) -> _HttpError:
    return _HttpError(400, {"code": "E_QUERY", "message": message,
                            "details": details})


def _classify(exc: ModelError) -> _HttpError:
    if isinstance(exc, (UnknownAxisError, UnknownLabelError, LevelRangeError,
                        UnknownGradeError)):
        return _HttpError(404, exc)
    return _HttpError(400, exc)


def _sigma_from_params(model: RiskModel, params: Mapping[str, str]) -> dict:
    sigma: dict[str, int | str] = dict(model.default_slice or ())
    for key, value in params.items():
        if key in _RESERVED_PARAMS:
            continue
        axis = model.space.axis(key)  # UnknownAxisError -> 404
        if axis.role is not AxisRole.CONTEXT:
            raise _bad(f"axis {key!r} is not a context axis", axis=key)
        sigma[key] = _level_ref(value)
    return sigma


def _level_ref(text: str) -> int | str:
    try:
        return int(text)
    except ValueError:
        return text


def _risk_from_params(model: RiskModel, params: Mapping[str, str]) -> RiskPosition:
    text = params.get("risk")
    if text is None:
        if model.risk is None:
            raise _bad("model has no risk position; pass risk=L,I")
        return model.risk
    parts = text.split(",")
    if len(parts) != 2:
        raise _bad(f"risk expects likelihood,impact, got {text!r}")
    return RiskPosition(
        likelihood=model.space.likelihood.level_of(_level_ref(parts[0])),
        impact=model.space.impact.level_of(_level_ref(parts[1])),
    )


def _slice_payload(model: RiskModel, grid_slice) -> dict:
    return {
        "sigma": dict(grid_slice.sigma),
        "likelihood": {
            "id": grid_slice.likelihood_axis.id,
            "labels": list(grid_slice.likelihood_axis.labels),
        },
        "impact": {
            "id": grid_slice.impact_axis.id,
            "labels": list(grid_slice.impact_axis.labels),
        },
        "grid": [list(col) for col in grid_slice.grid],
    }


def create_app(session: ApiSession, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="ndpolar", docs_url=None, redoc_url=None)

    @app.exception_handler(_HttpError)
    async def _http_error(_, exc: _HttpError):
        return JSONResponse(status_code=exc.status, content={"error": exc.body})

    @app.exception_handler(ModelError)
    async def _model_error(_, exc: ModelError):
        err = _classify(exc)
        return JSONResponse(status_code=err.status, content={"error": err.body})

    @app.get("/api/model")
    def get_model():
        snap = session.current()
        return {"revision": snap.revision, "document": snap.document}

    @app.put("/api/model")
    async def put_model(request: Request):
        try:
            document = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise _bad(f"request body is not valid JSON: {exc}")
        try:
            snap = session.replace(document)
        except ModelError as exc:
            return JSONResponse(status_code=422, content={"error": exc.to_dict()})
        return {"revision": snap.revision, "name": snap.model.name}

    @app.get("/api/slice")
    def get_slice(request: Request):
        snap = session.current()
        sigma = _sigma_from_params(snap.model, request.query_params)
        grid_slice = matrix_slice(snap.model, sigma)
        return {"revision": snap.revision, **_slice_payload(snap.model, grid_slice)}

    @app.get("/api/aggregate")
    def get_aggregate(request: Request):
        snap = session.current()
        sigma = _sigma_from_params(snap.model, request.query_params)
        risk = _risk_from_params(snap.model, request.query_params)
        grid_slice = matrix_slice(snap.model, sigma)
        lik, imp = aggregate_slice(snap.model.scale, grid_slice, risk)
        r1 = snap.model.space.likelihood.level_of(risk.likelihood)
        r2 = snap.model.space.impact.level_of(risk.impact)
        return {
            "revision": snap.revision,
            "sigma": dict(grid_slice.sigma),
            "risk": {"likelihood": r1, "impact": r2},
            "likelihood": list(lik.per_level),
            "impact": list(imp.per_level),
            "risk_grade": grid_slice.cell(r1, r2),
        }

    @app.get("/api/walk")
    def get_walk(request: Request):
        snap = session.current()
        vary = request.query_params.get("vary")
        if not vary:
            raise _bad("missing required parameter 'vary'")
        fixed = _sigma_from_params(snap.model, request.query_params)
        fixed.pop(vary, None)
        risk = _risk_from_params(snap.model, request.query_params)
        result = walk(snap.model, vary, fixed, risk)
        return {
            "revision": snap.revision,
            "axis": result.axis_id,
            "steps": [
                {
                    "level": s.level,
                    "label": s.label,
                    "risk_grade": s.risk_grade,
                    "likelihood": list(s.likelihood.per_level),
                    "impact": list(s.impact.per_level),
                    "violations": s.violation_count,
                    "digest": s.grid_digest,
                }
                for s in result.steps
            ],
        }

    @app.get("/api/violations")
    def get_violations(request: Request):
        snap = session.current()
        text = request.query_params.get("state")
        if not text:
            raise _bad("missing required parameter 'state'")
        refs = [_level_ref(p) for p in text.split(",")]
        if len(refs) != snap.model.space.d:
            raise _bad(
                f"state needs {snap.model.space.d} components, got {len(refs)}"
            )
        state = snap.model.space.resolve_state(refs)
        bits, total = violations(snap.model, state)
        return {"revision": snap.revision, "v": list(bits), "V": total}

    @app.get("/api/layout")
    def get_layout(request: Request):
        snap = session.current()
        theta0 = DEFAULT_THETA0
        if "theta0" in request.query_params:
            try:
                theta0 = float(request.query_params["theta0"])
            except ValueError:
                raise _bad("theta0 must be a number")
        lay = layout(snap.model.space, theta0)
        return {
            "revision": snap.revision,
            "d": lay.d,
            "theta0": lay.theta0,
            "sector_width": lay.sector_width,
            "sectors": [
                {"axis": s.axis_id, "start": s.start, "end": s.end,
                 "center": s.center}
                for s in lay.sectors
            ],
            "rings": [
                [{"inner": r.inner, "outer": r.outer, "center": r.center}
                 for r in axis_rings]
                for axis_rings in lay.rings
            ],
            "threshold_arcs": [
                {"axis": a.axis_id, "radius": a.radius, "start": a.start,
                 "end": a.end}
                for a in lay.threshold_arcs
            ],
        }

    def _render(request: Request, view: str) -> Response:
        snap = session.current()
        sigma = _sigma_from_params(snap.model, request.query_params)
        risk = _risk_from_params(snap.model, request.query_params)
        theta0 = DEFAULT_THETA0
        if "theta0" in request.query_params:
            try:
                theta0 = float(request.query_params["theta0"])
            except ValueError:
                raise _bad("theta0 must be a number")
        if view == "matrix":
            spec = RenderSpec(view="matrix", width=760, height=560, theta0=theta0)
            svg = render_matrix(snap.model, sigma, risk, spec)
        else:
            spec = RenderSpec(view="polar", theta0=theta0)
            svg = render_polar(snap.model, sigma, risk, spec)
        return Response(
            content=svg,
            media_type="image/svg+xml",
            headers={"X-Model-Revision": str(snap.revision)},
        )

    @app.get("/api/render/polar.svg")
    def render_polar_svg(request: Request):
        return _render(request, "polar")

    @app.get("/api/render/matrix.svg")
    def render_matrix_svg(request: Request):
        return _render(request, "matrix")

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        def index():
            snap = session.current()
            return {
                "name": snap.model.name,
                "revision": snap.revision,
                "endpoints": [
                    "/api/model", "/api/slice", "/api/aggregate", "/api/walk",
                    "/api/violations", "/api/layout",
                    "/api/render/polar.svg", "/api/render/matrix.svg",
                ],
            }

    return app
