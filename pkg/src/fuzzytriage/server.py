"""HTTP surface for live intake sessions.

The knowledge base is shared read-only across sessions; each session
serializes its own mutations and distinct sessions proceed in parallel.
Errors are machine-readable: {"code", "message", "path"} plus a full
"errors" list when several fields are at fault.
"""
from __future__ import annotations

import json
import threading

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from .engine import Session, SessionStore, new_session, prominent_sets
from .errors import EvaluationError, ParseError, ValidationFailure
from .kb import KnowledgeBase, knowledge_base_to_dict
from .report import FORMATS, export_report, render_structured, report_document


def _error(status: int, code: str, message: str, path: str = "", errors: list | None = None):
    body = {"code": code, "message": message, "path": path}
    if errors:
        body["errors"] = [{"path": i.path, "message": i.message} for i in errors]
    return JSONResponse(body, status_code=status)


def _matrices_body(session: Session) -> dict:
    return json.loads(render_structured(session.kb, session.record, session.matrices))


def create_app(
    kb: KnowledgeBase, store: SessionStore | None = None, ui_dir: str | None = None
) -> FastAPI:
    app = FastAPI(title="fuzzytriage", docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    @app.exception_handler(ValidationFailure)
    async def _validation_handler(request: Request, exc: ValidationFailure):
        first = exc.issues[0].path if exc.issues else ""
        return _error(422, "validation_error", str(exc), first, exc.issues)

    @app.exception_handler(ParseError)
    async def _parse_handler(request: Request, exc: ParseError):
        return _error(400, "parse_error", str(exc))

    @app.exception_handler(EvaluationError)
    async def _evaluation_handler(request: Request, exc: EvaluationError):
        return _error(422, "evaluation_error", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _request_handler(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        path = ".".join(str(p) for p in first.get("loc", ()))
        return _error(422, "validation_error", first.get("msg", "invalid request"), path)

    def get_session(session_id: str) -> Session | None:
        with registry_lock:
            return sessions.get(session_id)

    @app.get("/kb")
    def kb_overview():
        return {
            "alpha": kb.alpha,
            "counts": {
                "history_aspects": len(kb.history_aspects),
                "inferable": kb.split_p,
                "problems": len(kb.problems),
                "symptoms": len(kb.symptoms),
                "signs": len(kb.signs),
                "tests": len(kb.tests),
            },
            "kb": knowledge_base_to_dict(kb),
        }

    @app.post("/sessions", status_code=201)
    def create_session():
        session = new_session(kb, store=store)
        with registry_lock:
            sessions[session.session_id] = session
        return {
            "session_id": session.session_id,
            "revision": session.revision,
            "matrices": _matrices_body(session),
        }

    @app.get("/sessions/{session_id}")
    def session_summary(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "not_found", "no such session", f"/sessions/{session_id}")
        return {
            "session_id": session.session_id,
            "revision": session.revision,
            "alpha": session.alpha,
            "record": session.record_data(),
            "matrices": _matrices_body(session),
            "prominent": prominent_sets(kb, session.record.alpha_override),
            "audit": list(session.audit),
        }

    @app.post("/sessions/{session_id}/findings")
    def post_finding(session_id: str, finding: dict):
        session = get_session(session_id)
        if session is None:
            return _error(404, "not_found", "no such session", f"/sessions/{session_id}")
        session.apply_finding(finding)  # ValidationFailure -> 422 handler
        return {"revision": session.revision, "matrices": _matrices_body(session)}

    @app.put("/sessions/{session_id}/alpha")
    def put_alpha(session_id: str, body: dict):
        session = get_session(session_id)
        if session is None:
            return _error(404, "not_found", "no such session", f"/sessions/{session_id}")
        session.apply_finding({"kind": "alpha_override", "alpha": body.get("alpha")})
        return {"revision": session.revision, "matrices": _matrices_body(session)}

    @app.get("/sessions/{session_id}/preview")
    def preview(session_id: str, alpha: float):
        session = get_session(session_id)
        if session is None:
            return _error(404, "not_found", "no such session", f"/sessions/{session_id}")
        matrices = session.preview_alpha(alpha)
        doc = report_document(session.kb, session.record, matrices)
        doc["alpha"] = alpha
        return {
            "alpha": alpha,
            "revision": session.revision,
            "matrices": doc,
            "prominent": prominent_sets(kb, alpha),
        }

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str, format: str = "structured"):
        session = get_session(session_id)
        if session is None:
            return _error(404, "not_found", "no such session", f"/sessions/{session_id}")
        if format not in FORMATS:
            return _error(422, "validation_error", f"unknown report format {format!r}", "format")
        text = export_report(session, format)
        if format == "text":
            return PlainTextResponse(text)
        # Canonical bytes, not re-serialized: exports must stay byte-identical.
        return Response(text, media_type="application/json")

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        # mounted last so the API routes above keep precedence
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
