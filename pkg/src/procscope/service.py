"""HTTP API backing the analyst UI, under ``/api/v1``.

Workflow: upload a log, PUT named rulesets, POST enrich, then GET the
enriched log and graph exports. Sessions live in memory with TTL and LRU
eviction; the exported files are the durable artifact, not the server.

Enrichment always recomputes from the uploaded base log, so repeating it
with unchanged scopes returns byte-identical results. All evaluation happens
in the library layers; this module only maps errors to status codes:
400 bad upload, 404 unknown log, 409 not enriched yet, 413 too large,
422 invalid rulesets or failing enrichment.
"""
from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .engine import apply_scopes, scope_summary
from .errors import OcelSchemaError, ProcscopeError
from .graph import (
    DotConfig,
    EDGE_LABEL_METRICS,
    NODE_COLOR_MODES,
    NODE_SIZE_METRICS,
    build_graph,
    export_dot,
    export_vosviewer,
    graph_to_dict,
)
from .lang import ScopeDefinition, ruleset_from_json, validate_ruleset
from .model import Log
from .ocel_json import export_json, import_json


@dataclass
class Session:
    log_id: str
    base_log: Log
    scope_defs: list[ScopeDefinition] = field(default_factory=list)
    enriched_log: Log | None = None
    last_access: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-memory sessions with TTL expiry and LRU eviction."""

    def __init__(self, max_sessions: int = 64, ttl_seconds: float = 3600.0):
        self.max_sessions = max_sessions
        self.ttl_seconds = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, base_log: Log) -> Session:
        session = Session(log_id=uuid.uuid4().hex, base_log=base_log)
        with self._lock:
            self._evict_locked()
            self._sessions[session.log_id] = session
        return session

    def get(self, log_id: str) -> Session | None:
        with self._lock:
            self._evict_locked()
            session = self._sessions.get(log_id)
            if session is not None:
                session.last_access = time.monotonic()
            return session

    def _evict_locked(self) -> None:
        now = time.monotonic()
        expired = [k for k, s in self._sessions.items() if now - s.last_access > self.ttl_seconds]
        for key in expired:
            del self._sessions[key]
        while len(self._sessions) >= self.max_sessions:
            oldest = min(self._sessions.values(), key=lambda s: s.last_access)
            del self._sessions[oldest.log_id]


def _error(status: int, code: str, message: str, **extra: Any) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "message": message, **extra})


def _violations_json(violations) -> list[dict[str, Any]]:
    return [
        {"code": v.code, "where": v.where, "detail": v.detail, "pos": list(v.pos) if v.pos else None}
        for v in violations
    ]


def _registries(log: Log) -> dict[str, Any]:
    return {
        "event_types": {name: dict(schema) for name, schema in sorted(log.event_types.items())},
        "object_types": {name: dict(schema) for name, schema in sorted(log.object_types.items())},
    }


def create_app(
    max_upload_mb: int = 256,
    ttl_seconds: float = 3600.0,
    max_sessions: int = 64,
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    app = FastAPI(title="procscope", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(max_sessions=max_sessions, ttl_seconds=ttl_seconds)
    app.state.store = store
    max_bytes = max_upload_mb * 1024 * 1024

    @app.post("/api/v1/logs")
    async def upload_log(request: Request):
        body = await request.body()
        if len(body) > max_bytes:
            return _error(413, "too-large", f"upload exceeds {max_upload_mb} MiB")
        try:
            log = import_json(body)
        except ProcscopeError as exc:
            return _error(400, exc.code, str(exc), **_safe_details(exc))
        session = store.create(log)
        return {
            "log_id": session.log_id,
            "stats": {
                "events": len(log.events),
                "objects": len(log.objects),
                "e2o": len(log.e2o),
                "o2o": len(log.o2o),
            },
            **_registries(log),
        }

    @app.put("/api/v1/logs/{log_id}/scopes")
    async def put_scopes(log_id: str, request: Request):
        session = store.get(log_id)
        if session is None:
            return _error(404, "unknown-log", f"no log {log_id!r}")
        try:
            raw = await request.json()
        except Exception:
            return _error(422, "schema-error", "body must be a JSON array of scope definitions")
        if not isinstance(raw, list):
            return _error(422, "schema-error", "body must be a JSON array of scope definitions")

        defs: list[ScopeDefinition] = []
        results = []
        failed = False
        seen: set[str] = set()
        for i, entry in enumerate(raw):
            if not isinstance(entry, dict) or not isinstance(entry.get("name"), str) or "ruleset" not in entry:
                return _error(422, "schema-error", f"scope [{i}] needs a name and a ruleset")
            name = entry["name"]
            if name in seen:
                return _error(422, "duplicate-scope", f"scope {name!r} defined twice")
            seen.add(name)
            try:
                expr = ruleset_from_json(entry["ruleset"])
            except OcelSchemaError as exc:
                return _error(422, exc.code, str(exc), scope=name, path=exc.details.get("path"))
            report = validate_ruleset(expr, session.base_log)
            results.append({"name": name, "violations": _violations_json(report.violations)})
            if not report.ok:
                failed = True
            defs.append(ScopeDefinition(name, expr))
        if failed:
            return JSONResponse(status_code=422, content={"error": "invalid-rulesets", "scopes": results})
        with session.lock:
            session.scope_defs = defs
            session.enriched_log = None
        return {"scopes": results}

    @app.post("/api/v1/logs/{log_id}/enrich")
    async def enrich(log_id: str):
        session = store.get(log_id)
        if session is None:
            return _error(404, "unknown-log", f"no log {log_id!r}")
        with session.lock:
            if not session.scope_defs:
                return _error(409, "no-scopes", "PUT scope definitions before enriching")
            try:
                enriched = apply_scopes(session.base_log, session.scope_defs)
            except ProcscopeError as exc:
                return _error(422, exc.code, str(exc), **_safe_details(exc))
            session.enriched_log = enriched
            summaries = [
                {
                    "name": s.name,
                    "events": s.event_count,
                    "objects": s.object_count,
                }
                for s in (scope_summary(enriched, d.name) for d in session.scope_defs)
            ]
        return {"scopes": summaries}

    def _enriched_or_error(log_id: str) -> tuple[Session, Log] | JSONResponse:
        session = store.get(log_id)
        if session is None:
            return _error(404, "unknown-log", f"no log {log_id!r}")
        enriched = session.enriched_log
        if enriched is None:
            return _error(409, "not-enriched", "apply scopes first (POST /enrich)")
        return session, enriched

    @app.get("/api/v1/logs/{log_id}/pocel")
    async def get_pocel(log_id: str):
        got = _enriched_or_error(log_id)
        if isinstance(got, JSONResponse):
            return got
        _, enriched = got
        return Response(content=export_json(enriched), media_type="application/json")

    @app.get("/api/v1/logs/{log_id}/graph")
    async def get_graph(
        log_id: str,
        edge_label: str = "shared_objects",
        node_size: str = "object_count",
        node_color: str = "total",
    ):
        got = _enriched_or_error(log_id)
        if isinstance(got, JSONResponse):
            return got
        if edge_label not in EDGE_LABEL_METRICS or node_size not in NODE_SIZE_METRICS or node_color not in NODE_COLOR_MODES:
            return _error(422, "bad-settings", "unknown graph setting value")
        _, enriched = got
        document = graph_to_dict(build_graph(enriched))
        document["settings"] = {
            "edge_label": edge_label, "node_size": node_size, "node_color": node_color,
        }
        return Response(content=json.dumps(document, indent=2) + "\n", media_type="application/json")

    @app.get("/api/v1/logs/{log_id}/graph.dot")
    async def get_graph_dot(
        log_id: str,
        edge_label: str = "shared_objects",
        node_size: str = "object_count",
        node_color: str = "total",
    ):
        got = _enriched_or_error(log_id)
        if isinstance(got, JSONResponse):
            return got
        _, enriched = got
        try:
            cfg = DotConfig(node_size=node_size, edge_label=edge_label, node_color=node_color)
        except ValueError as exc:
            return _error(422, "bad-settings", str(exc))
        return Response(content=export_dot(build_graph(enriched), cfg), media_type="text/vnd.graphviz")

    @app.get("/api/v1/logs/{log_id}/graph.vos")
    async def get_graph_vos(log_id: str):
        got = _enriched_or_error(log_id)
        if isinstance(got, JSONResponse):
            return got
        _, enriched = got
        return Response(content=export_vosviewer(build_graph(enriched)), media_type="application/json")

    return app


def _safe_details(exc: ProcscopeError) -> dict[str, Any]:
    out = {}
    for key, value in exc.details.items():
        if isinstance(value, (str, int, float, bool)) or value is None:
            out[key] = value
    return out


def main(argv: list[str] | None = None) -> None:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="procscope-service", description=__doc__)
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--max-upload-mb", type=int, default=256)
    parser.add_argument("--ui", metavar="DIR", default=None,
                        help="also serve a built frontend directory at /")
    args = parser.parse_args(argv)
    app = create_app(max_upload_mb=args.max_upload_mb)
    if args.ui:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.ui, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
