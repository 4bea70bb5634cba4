"""HTTP surface for the chat UI and programmatic clients.

Every engine error maps to exactly one (status, code) pair; unexpected
failures return an opaque incident id and never leak internals. Message
handling is idempotent per (session, client-supplied turn id): a retransmit
returns the stored original turn.
"""

from __future__ import annotations

import logging
import uuid

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .catalog import ColumnMeta
from .dialogue import AssistantTurn, Dependencies, DialogueManager
from .engine import result_to_payload
from .errors import TableTalkError, UnknownTable
from .matcher import QueryResolution
from .sessions import COMMENT

logger = logging.getLogger("tabletalk.api")

STATUS_BY_CODE = {
    "session_not_found": 404,
    "unknown_table": 404,
    "unknown_column": 404,
    "stale_sequence": 409,
    "dangling_reference": 409,
    "missing_slot": 422,
    "kind_mismatch": 422,
    "empty_after_filter": 422,
    "non_numeric_column": 422,
    "empty_column": 422,
}


class SessionBody(BaseModel):
    user: str


class MessageBody(BaseModel):
    user: str
    text: str
    turn_id: str | None = None


class CommentBody(BaseModel):
    user: str
    text: str
    target_seq: int | None = None


def _column_payload(cm: ColumnMeta) -> dict:
    return {
        "table": cm.table,
        "column": cm.column,
        "description": cm.description,
        "type": cm.type,
        "codebook": [{"code": c, "label": l} for c, l in cm.codebook],
        "synonyms": list(cm.synonyms),
        "na_codes": sorted(cm.na_codes),
    }


def resolution_payload(r: QueryResolution | None) -> dict | None:
    if r is None:
        return None
    return {
        "command": r.command,
        "bindings": dict(r.bindings),
        "missing": list(r.missing),
        "confidence": r.confidence,
        "alternatives": [[name, score] for name, score in r.alternatives],
        "conditions": [
            {"column": c.column, "op": c.op, "value": c.value} for c in r.conditions
        ],
    }


def turn_payload(turn: AssistantTurn) -> dict:
    return {
        "kind": turn.kind,
        "text": turn.text,
        "result": result_to_payload(turn.result) if turn.result is not None else None,
        "resolution": resolution_payload(turn.resolution),
    }


def create_app(deps: Dependencies, manager: DialogueManager | None = None) -> FastAPI:
    app = FastAPI(title="tabletalk", version="0.1.0")
    # the chat UI may be served from another origin during development
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    manager = manager or DialogueManager(deps)

    @app.exception_handler(TableTalkError)
    async def engine_error(request: Request, exc: TableTalkError):
        status = STATUS_BY_CODE.get(exc.code)
        if status is None:
            incident = uuid.uuid4().hex
            logger.exception("incident %s: %s", incident, exc)
            return JSONResponse(
                status_code=500,
                content={"error": {"code": "internal", "message": f"incident {incident}"}},
            )
        return JSONResponse(
            status_code=status,
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    @app.get("/api/datasets")
    def datasets():
        return {
            "datasets": [
                {"name": name, "row_count": table.row_count}
                for name, table in sorted(deps.tables.items())
            ]
        }

    @app.get("/api/datasets/{name}/metadata")
    def metadata(name: str):
        if name not in deps.catalog.table_names():
            raise UnknownTable(f"no dataset {name!r}")
        return {
            "table": name,
            "columns": [_column_payload(cm) for cm in deps.catalog.columns_of(name)],
        }

    @app.post("/api/sessions")
    def create_session(body: SessionBody):
        session = manager.create_session(body.user)
        return {"session": session, "user": body.user}

    @app.post("/api/sessions/{session}/messages")
    def post_message(session: str, body: MessageBody):
        if body.turn_id:
            stored = deps.store.find_turn(session, body.turn_id)
            if stored is not None:
                return stored
        turn = manager.handle(session, body.user, body.text, body.turn_id)
        return turn_payload(turn)

    @app.get("/api/sessions")
    def list_sessions(filter: str | None = None, user: str | None = None):
        summaries = deps.store.list_sessions(user=user, text=filter)
        return {
            "sessions": [
                {
                    "session": s.session,
                    "owner": s.owner,
                    "started": s.started,
                    "query_count": s.query_count,
                    "comment_count": s.comment_count,
                    "title": s.title,
                }
                for s in summaries
            ]
        }

    @app.get("/api/sessions/{session}/events")
    def session_events(session: str, since: int = 0):
        if not deps.store.has_session(session):
            if manager.knows_session(session):
                return {"session": session, "events": []}
        events = deps.store.events_since(session, since)
        return {
            "session": session,
            "events": [e.to_record() for e in events],
        }

    @app.post("/api/sessions/{session}/comments")
    def post_comment(session: str, body: CommentBody):
        payload = {"text": body.text}
        if body.target_seq is not None:
            payload["target_seq"] = body.target_seq
        event = deps.store.append_new(session, body.user, COMMENT, payload)
        return {"session": session, "seq": event.seq}

    return app
