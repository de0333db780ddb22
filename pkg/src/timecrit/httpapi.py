"""HTTP surface over DecisionService.

Thin by design: endpoints parse JSON, call the service, and serialize the
result.  All domain failures surface as {"code", "message", "path"} with
404 for missing ids and 400 for everything else.
"""

from __future__ import annotations

import json
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .errors import InputError, NotFoundError, ParseError, TimecritError
from .files import parse_time_distribution, parse_treatment
from .service import (
    DecisionService,
    load_and_go_dict,
    plan_evaluation_dict,
)


async def _body(request: Request) -> Any:
    raw = await request.body()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"request body is not valid JSON: {exc}", "") from exc


def _require_object(payload: Any) -> dict:
    if not isinstance(payload, dict):
        raise InputError("request body must be a JSON object")
    return payload


def create_app(service: DecisionService | None = None) -> FastAPI:
    service = service or DecisionService()
    app = FastAPI(title="timecrit", docs_url=None, redoc_url=None)
    app.state.service = service

    @app.exception_handler(TimecritError)
    async def _domain_error(request: Request, exc: TimecritError):
        status = 404 if isinstance(exc, NotFoundError) else 400
        return JSONResponse(
            status_code=status,
            content={"code": exc.code, "message": exc.message, "path": exc.path},
        )

    @app.exception_handler(RequestValidationError)
    async def _request_error(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        first = errors[0] if errors else {}
        path = ".".join(str(part) for part in first.get("loc", ()))
        return JSONResponse(
            status_code=400,
            content={
                "code": "invalid_input",
                "message": str(first.get("msg", "invalid request")),
                "path": path,
            },
        )

    @app.post("/models")
    async def post_model(request: Request):
        payload = _require_object(await _body(request))
        return {"id": service.load_model(payload)}

    @app.post("/sessions")
    async def post_session(request: Request):
        payload = _require_object(await _body(request))
        model_id = payload.get("model")
        if not isinstance(model_id, str):
            raise InputError("field 'model' must be a model id string", "model")
        onset = None
        if "onset" in payload:
            onset = parse_time_distribution(payload["onset"], "onset")
        context = payload.get("context")
        if context is not None and not isinstance(context, str):
            raise InputError("field 'context' must be a string", "context")
        origin = payload.get("origin", 0.0)
        if not isinstance(origin, (int, float)) or isinstance(origin, bool):
            raise InputError("field 'origin' must be a number", "origin")
        session_id = service.create_session(model_id, onset, context, float(origin))
        return {"id": session_id}

    @app.post("/sessions/{session_id}/findings")
    async def post_finding(session_id: str, request: Request):
        payload = _require_object(await _body(request))
        variable = payload.get("variable")
        state = payload.get("state")
        if not isinstance(variable, str):
            raise InputError("field 'variable' must be a string", "variable")
        if not isinstance(state, str):
            raise InputError("field 'state' must be a string", "state")
        timestamp = payload.get("timestamp", 0.0)
        if not isinstance(timestamp, (int, float)) or isinstance(timestamp, bool):
            raise InputError("field 'timestamp' must be a number", "timestamp")
        assessment = service.post_finding(session_id, variable, state, float(timestamp))
        return assessment.to_dict()

    @app.get("/sessions/{session_id}/assessment")
    async def get_assessment(session_id: str, now: float, grid: str | None = None):
        delays = None
        if grid is not None:
            try:
                delays = [float(part) for part in grid.split(",") if part.strip()]
            except ValueError:
                raise InputError(
                    "query parameter 'grid' must be comma-separated numbers", "grid"
                ) from None
        assessment = service.get_assessment(session_id, now, delays)
        return assessment.to_dict()

    @app.post("/sessions/{session_id}/load-and-go")
    async def post_load_and_go(session_id: str, request: Request):
        payload = _require_object(await _body(request))
        if "treatment" not in payload:
            raise InputError("field 'treatment' is required", "treatment")
        treatment = parse_treatment(payload["treatment"], "treatment")
        t = payload.get("t")
        if not isinstance(t, (int, float)) or isinstance(t, bool):
            raise InputError("field 't' must be a number", "t")
        now = payload.get("now", 0.0)
        if not isinstance(now, (int, float)) or isinstance(now, bool):
            raise InputError("field 'now' must be a number", "now")
        report = service.load_and_go(session_id, treatment, float(t), float(now))
        return load_and_go_dict(report)

    @app.post("/scenarios/evaluate")
    async def post_scenario(request: Request):
        payload = _require_object(await _body(request))
        evaluations = service.evaluate_scenario(payload)
        return {"plans": [plan_evaluation_dict(e) for e in evaluations]}

    @app.get("/sessions/{session_id}/export")
    async def export_session(session_id: str):
        return Response(
            content=service.save_session(session_id), media_type="application/json"
        )

    @app.post("/sessions/import")
    async def import_session(request: Request):
        payload = await _body(request)
        return {"id": service.load_session(json.dumps(payload))}

    return app
