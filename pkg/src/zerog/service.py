"""HTTP sizing service.

Three endpoints: POST /api/size runs the mission sizing solver, GET
/api/presets lists the curated configurations, GET /api/health is a
liveness probe. Request validation is the same code path the CLI uses;
malformed input returns 400 with a {field_path: message} map rather than a
framework-shaped 422, and an infeasible mission is a well-formed 200 with
feasible=false since it is an answer, not an error.
"""

from __future__ import annotations

import dataclasses

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .configio import RequestValidationError, parse_sizing_request
from .logio import plan_to_dict
from .presets import PRESETS
from .sizing import InfeasibleMissionError, solve_mission

MAX_PROFILE_POINTS = 1200


def size_mission(data: dict) -> dict:
    """Shared sizing entry: validated request mapping in, response dict out.
    Raises RequestValidationError on bad input."""
    params, constraints, atmosphere = parse_sizing_request(data)
    try:
        plan = solve_mission(params, constraints, atmosphere)
    except InfeasibleMissionError as exc:
        return {
            "feasible": False,
            "violated_constraint": exc.violated_constraint,
            "message": str(exc),
        }
    out = {"feasible": True,
           "meets_min_duration": plan.meets_min_duration(constraints)}
    out.update(plan_to_dict(plan, max_points=MAX_PROFILE_POINTS))
    return out


def create_app() -> FastAPI:
    app = FastAPI(title="zerog sizing service", docs_url=None, redoc_url=None)

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/presets")
    def presets() -> dict:
        out = []
        for p in PRESETS.values():
            out.append({
                "name": p.name,
                "description": p.description,
                "vehicle": dataclasses.asdict(p.params),
                "constraints": dataclasses.asdict(p.constraints),
            })
        return {"presets": out}

    @app.post("/api/size")
    async def size(request: Request):
        try:
            data = await request.json()
        except Exception:
            return JSONResponse(status_code=400,
                                content={"errors": {"body": "invalid JSON"}})
        try:
            return size_mission(data)
        except RequestValidationError as exc:
            return JSONResponse(status_code=400,
                                content={"errors": exc.errors})

    return app
