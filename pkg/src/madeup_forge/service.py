"""HTTP facade for the playground: compile-and-mesh plus lesson retrieval.

Untrusted code is contained by resource limits alone: the language has no
filesystem or network surface, so a step budget, a vertex budget, and a
wall-clock deadline bound every request. Each request owns an isolated
evaluation; the only shared state is the read-only lessons directory.
"""

from __future__ import annotations

import hashlib
import re
import time
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .diagnostics import MadeupRuntimeError, MadeupSyntaxError, MeshError
from .exporters import mesh_json_payload
from .interpreter import EvalLimits
from .mesh import GridParams, TubeParams
from .pipeline import run_source
from .turtle import TraceMode

_LESSON_ID = re.compile(r"^[A-Za-z0-9._-]+$")


class TubeSpec(BaseModel):
    sides: int = 8
    radius: float = 0.5
    closure_epsilon: float = 1e-6


class GridSpec(BaseModel):
    rows: int
    cols: int
    wrap_rows: bool = False
    wrap_cols: bool = False


class LimitsSpec(BaseModel):
    max_steps: int | None = None
    max_vertices: int | None = None


class RunRequest(BaseModel):
    source: str
    mode: str = "polyline"
    tube: TubeSpec | None = None
    grid: GridSpec | None = None
    limits: LimitsSpec | None = None


def create_app(lessons_dir: Path | str | None = None,
               max_body_bytes: int = 256 * 1024,
               time_budget_ms: int = 2000,
               cors_origins: tuple[str, ...] = ("*",),
               max_steps_cap: int = 10_000_000,
               max_vertices_cap: int = 5_000_000) -> FastAPI:
    app = FastAPI(title="madeup-forge", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )
    lessons_root = Path(lessons_dir).resolve() if lessons_dir is not None else None

    @app.middleware("http")
    async def reject_oversized_bodies(request: Request, call_next):
        declared = request.headers.get("content-length")
        if declared is not None and declared.isdigit():
            if int(declared) > max_body_bytes:
                return JSONResponse(status_code=413, content={"detail": "body too large"})
        elif request.method == "POST":
            # Chunked uploads carry no Content-Length; measure for real.
            # Starlette caches body(), so the handler can still read it.
            body = await request.body()
            if len(body) > max_body_bytes:
                return JSONResponse(status_code=413, content={"detail": "body too large"})
        return await call_next(request)

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/run")
    def run(request: RunRequest) -> Response:
        limits = _clamped_limits(request.limits, max_steps_cap, max_vertices_cap)
        try:
            mode = TraceMode(request.mode)
        except ValueError:
            return _failure([f"unknown mode {request.mode!r}"], line=0, column=0)

        tube = TubeParams(**request.tube.model_dump()) if request.tube else TubeParams()
        grid = GridParams(**request.grid.model_dump()) if request.grid else None
        deadline = time.monotonic() + time_budget_ms / 1000.0
        try:
            result = run_source(request.source, mode=mode, tube=tube, grid=grid,
                                limits=limits, deadline=deadline)
        except MadeupSyntaxError as exc:
            return JSONResponse(status_code=422, content={
                "ok": False,
                "diagnostics": [
                    {"message": d.message, "line": d.span.line, "column": d.span.column}
                    for d in exc.diagnostics
                ],
            })
        except MadeupRuntimeError as exc:
            return JSONResponse(status_code=422, content={
                "ok": False,
                "diagnostics": [{
                    "message": exc.message,
                    "line": exc.span.line,
                    "column": exc.span.column,
                }],
            })
        except MeshError as exc:
            return _failure([str(exc)], line=0, column=0)

        return JSONResponse(status_code=200, content={
            "ok": True,
            "mesh": mesh_json_payload(result.mesh, result.trace),
        })

    @app.get("/api/lessons/{lesson_id}")
    def lesson(lesson_id: str, request: Request) -> Response:
        if lessons_root is None or not _LESSON_ID.match(lesson_id) or ".." in lesson_id:
            return JSONResponse(status_code=404, content={"detail": "not found"})
        candidate = (lessons_root / lesson_id).resolve()
        if not candidate.is_file():
            candidate = (lessons_root / f"{lesson_id}.muplesson").resolve()
        if not str(candidate).startswith(str(lessons_root) + "/") or not candidate.is_file():
            return JSONResponse(status_code=404, content={"detail": "not found"})
        body = candidate.read_bytes()
        etag = '"' + hashlib.sha256(body).hexdigest()[:32] + '"'
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304, headers={"ETag": etag})
        return Response(
            content=body,
            media_type="application/json",
            headers={"ETag": etag, "Cache-Control": "public, max-age=3600"},
        )

    return app


def _clamped_limits(spec: LimitsSpec | None, steps_cap: int,
                    vertices_cap: int) -> EvalLimits:
    steps = steps_cap
    vertices = vertices_cap
    if spec is not None:
        if spec.max_steps is not None:
            steps = max(1, min(spec.max_steps, steps_cap))
        if spec.max_vertices is not None:
            vertices = max(1, min(spec.max_vertices, vertices_cap))
    return EvalLimits(max_steps=steps, max_vertices=vertices)


def _failure(messages: list[str], line: int, column: int) -> JSONResponse:
    return JSONResponse(status_code=422, content={
        "ok": False,
        "diagnostics": [
            {"message": m, "line": line, "column": column} for m in messages
        ],
    })
