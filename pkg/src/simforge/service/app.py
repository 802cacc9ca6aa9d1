"""HTTP session service: compile on first request, re-run on every change.

Each session pairs a compiled simulation with one client's parameter
valuation and its latest results.  Mutating endpoints re-run the plan and
embed a monotonically increasing run counter so clients can detect stale
responses.  Requests for different sessions run in parallel; runs within one
session are serialized by the session lock.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from ..document import resolve_language
from ..jsonutil import sanitize_floats
from ..render import (
    SessionFormatError,
    build_plot_model,
    parse_session_text,
    render_svg,
    save_session,
)
from ..runtime import RunInputError, make_valuation, run
from ..runtime.engine import result_to_csv, result_to_dict
from .registry import SimulationRegistry
from .sessions import Session, SessionError, SessionStore

__all__ = ["ServiceConfig", "create_app", "serve"]

MAX_BODY_BYTES = 1 << 20  # 1 MiB


@dataclass
class ServiceConfig:
    simulations_dir: Path
    host: str = "127.0.0.1"
    port: int = 8000
    session_ttl: float = 1800.0
    ui_dir: Optional[Path] = None

    @classmethod
    def load(
        cls,
        simulations_dir: str | Path,
        config_file: Optional[str | Path] = None,
        env: Optional[dict] = None,
    ) -> "ServiceConfig":
        """File settings, overridden by environment, overridden by arguments."""
        env = os.environ if env is None else env
        host, port, ttl, ui_dir = "127.0.0.1", 8000, 1800.0, None
        if config_file:
            data = json.loads(Path(config_file).read_text(encoding="utf-8"))
            listen = data.get("listen")
            if listen:
                host, _, port_text = listen.rpartition(":")
                port = int(port_text)
            ttl = float(data.get("sessionTtlSeconds", ttl))
            if data.get("simulationsDir"):
                simulations_dir = data["simulationsDir"]
            if data.get("uiDir"):
                ui_dir = Path(data["uiDir"])
        listen = env.get("SIMFORGE_LISTEN")
        if listen:
            host, _, port_text = listen.rpartition(":")
            port = int(port_text)
        if env.get("SIMFORGE_SIMULATIONS_DIR"):
            simulations_dir = env["SIMFORGE_SIMULATIONS_DIR"]
        if env.get("SIMFORGE_SESSION_TTL"):
            ttl = float(env["SIMFORGE_SESSION_TTL"])
        if env.get("SIMFORGE_UI_DIR"):
            ui_dir = Path(env["SIMFORGE_UI_DIR"])
        return cls(
            simulations_dir=Path(simulations_dir),
            host=host or "127.0.0.1",
            port=port,
            session_ttl=ttl,
            ui_dir=ui_dir,
        )


def _error(status: int, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail=message)


def create_app(config: ServiceConfig) -> FastAPI:
    registry = SimulationRegistry(config.simulations_dir)
    store = SessionStore(ttl_seconds=config.session_ttl)
    app = FastAPI(title="simforge", docs_url=None, redoc_url=None)
    app.state.registry = registry
    app.state.sessions = store

    @app.middleware("http")
    async def cap_body_size(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and int(length) > MAX_BODY_BYTES:
            return JSONResponse({"detail": "request body too large"}, status_code=413)
        return await call_next(request)

    def get_session(sid: str) -> Session:
        try:
            return store.get(sid)
        except SessionError as exc:
            raise _error(exc.status, str(exc)) from None

    def rerun(session: Session, overrides: Optional[dict] = None) -> list[str]:
        """Apply overrides to the session valuation and re-run.  Serialized."""
        warnings: list[str] = []
        with session.lock:
            if overrides:
                merged, warnings = _apply_overrides(session, overrides)
                session.valuation = merged
            session.last_result = run(session.compute_ir, session.valuation)
            session.run_counter += 1
        return warnings

    def _apply_overrides(session: Session, overrides: dict):
        base = dict(session.valuation)
        try:
            fresh, warnings = make_valuation(session.compute_ir, overrides)
        except RunInputError as exc:
            raise _error(400, str(exc)) from None
        for symbol in overrides:
            base[symbol] = fresh[symbol]
        return base, warnings

    def result_payload(session: Session, warnings: list[str]) -> dict:
        return sanitize_floats(
            {
                "runCounter": session.run_counter,
                "warnings": warnings,
                "result": result_to_dict(session.last_result),
            }
        )

    # -- endpoints ----------------------------------------------------------

    @app.get("/api/simulations")
    def list_simulations():
        return [
            {
                "docId": entry.doc_id,
                "title": entry.title,
                "keywords": entry.keywords,
                "languages": entry.languages,
            }
            for entry in sorted(
                registry.entries.values(), key=lambda e: e.doc_id
            )
        ]

    @app.post("/api/simulations/{doc_id}/sessions", status_code=201)
    def create_session(doc_id: str, body: Optional[dict] = Body(default=None)):
        entry = registry.get(doc_id)
        if entry is None:
            raise _error(404, f"unknown simulation {doc_id!r}")
        language = (body or {}).get("language")
        compute_ir, ui_ir = registry.compiled(doc_id, language)
        valuation, warnings = make_valuation(compute_ir)
        session = Session(
            session_id=store.new_id(),
            doc_id=doc_id,
            language=language,
            compute_ir=compute_ir,
            ui_ir=ui_ir,
            valuation=valuation,
            last_result=run(compute_ir, valuation),
            run_counter=1,
        )
        store.add(session)
        payload = result_payload(session, warnings)
        payload["sessionId"] = session.session_id
        payload["uiForm"] = ui_ir.to_dict()
        return payload

    @app.patch("/api/sessions/{sid}/params")
    def patch_params(sid: str, body: dict = Body(...)):
        session = get_session(sid)
        if not isinstance(body, dict) or not body:
            raise _error(400, "expected a non-empty {symbol: value} object")
        warnings = rerun(session, body)
        return result_payload(session, warnings)

    @app.post("/api/sessions/{sid}/point/{label}")
    def move_point(sid: str, label: str, body: dict = Body(...)):
        session = get_session(sid)
        decl = next(
            (p for p in session.compute_ir.point_decls if p.label == label), None
        )
        if decl is None:
            raise _error(400, f"unknown point {label!r}")
        try:
            x = float(body["x"])
            y = float(body["y"])
        except (KeyError, TypeError, ValueError):
            raise _error(400, "body must carry numeric x and y") from None
        warnings = rerun(session, {decl.x1_symbol: x, decl.x2_symbol: y})
        payload = result_payload(session, warnings)
        px, py = session.last_result.points[label]
        payload["point"] = {"x": px, "y": py}
        return payload

    @app.get("/api/sessions/{sid}/plot/{windex}.svg")
    def plot_svg(sid: str, windex: str):
        session = get_session(sid)
        try:
            index = int(windex)
        except ValueError:
            raise _error(400, f"bad window index {windex!r}") from None
        entry = registry.entries[session.doc_id]
        display = resolve_language(entry.doc, session.language).doc.display
        if index < 0 or index >= max(1, len(display)):
            raise _error(404, f"window {index} out of range")
        model = build_plot_model(display, session.last_result)
        svg = render_svg(model, window_index=index)
        return Response(content=svg, media_type="image/svg+xml")

    @app.get("/api/sessions/{sid}/export.csv")
    def export_csv(sid: str):
        session = get_session(sid)
        return PlainTextResponse(
            result_to_csv(session.last_result), media_type="text/csv"
        )

    @app.get("/api/sessions/{sid}/session-file")
    def get_session_file(sid: str):
        session = get_session(sid)
        return PlainTextResponse(
            save_session(session.valuation, session.doc_id),
            media_type="text/plain",
        )

    @app.put("/api/sessions/{sid}/session-file")
    def put_session_file(sid: str, body: bytes = Body(...)):
        session = get_session(sid)
        try:
            doc_id, overrides = parse_session_text(body.decode("utf-8"))
        except (SessionFormatError, UnicodeDecodeError) as exc:
            raise _error(400, str(exc)) from None
        if doc_id != session.doc_id:
            raise _error(
                400,
                f"session file is for document {doc_id!r}, not {session.doc_id!r}",
            )
        known = {d.symbol for d in session.compute_ir.param_decls}
        warnings = [
            f"unknown parameter {sym}" for sym in overrides if sym not in known
        ]
        usable = {k: v for k, v in overrides.items() if k in known}
        warnings += rerun(session, usable)
        return result_payload(session, warnings)

    @app.post("/api/sessions/{sid}/language")
    def switch_language(sid: str, body: dict = Body(...)):
        session = get_session(sid)
        language = body.get("language")
        if language is not None and not isinstance(language, str):
            raise _error(400, "language must be a string or null")
        compute_ir, ui_ir = registry.compiled(session.doc_id, language)
        with session.lock:
            session.language = language
            session.compute_ir = compute_ir
            session.ui_ir = ui_ir
            session.last_result = run(compute_ir, session.valuation)
            session.run_counter += 1
        payload = result_payload(session, [])
        payload["uiForm"] = ui_ir.to_dict()
        return payload

    @app.delete("/api/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        try:
            store.delete(sid)
        except SessionError as exc:
            raise _error(exc.status, str(exc)) from None
        return Response(status_code=204)

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig) -> None:  # pragma: no cover - manual entry point
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port)
