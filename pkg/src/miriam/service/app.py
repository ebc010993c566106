"""HTTP surface: session REST endpoints plus a server-sent event stream.

GET /api/sessions/{id}/stream?after=N resumes from message N; the
Last-Event-ID header works too, so EventSource reconnects replay the gap
automatically.
"""

from __future__ import annotations

import json
import os
from typing import Optional

from fastapi import FastAPI, Header, HTTPException, Query
from fastapi.responses import StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..mission.plan import plan_to_doc
from .runtime import MissionRuntime
from .sessions import UnknownSessionError

HEARTBEAT_S = 15.0


class MessageIn(BaseModel):
    text: str = ""


def sse_format(event: str, data: dict, event_id: Optional[int] = None) -> str:
    lines = [f"event: {event}"]
    if event_id is not None:
        lines.append(f"id: {event_id}")
    lines.append(f"data: {json.dumps(data)}")
    return "\n".join(lines) + "\n\n"


def create_app(runtime: MissionRuntime, heartbeat_s: float = HEARTBEAT_S) -> FastAPI:
    app = FastAPI(title="miriam", docs_url=None, redoc_url=None)

    def get_session(session_id: str):
        try:
            return runtime.sessions.get(session_id)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session")

    @app.post("/api/sessions")
    def open_session():
        session, greeting = runtime.open_session()
        return {"session_id": session.session_id, "greeting": greeting.to_dict()}

    @app.post("/api/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageIn):
        get_session(session_id)
        reply = runtime.post_message(session_id, body.text)
        return reply.to_dict()

    @app.get("/api/sessions/{session_id}/stream")
    def stream(
        session_id: str,
        after: Optional[int] = Query(default=None),
        last_event_id: Optional[str] = Header(default=None),
    ):
        session = get_session(session_id)
        resume_from = after
        if resume_from is None and last_event_id:
            try:
                resume_from = int(last_event_id)
            except ValueError:
                resume_from = None

        def generate():
            replay, queue = session.subscribe(resume_from)
            try:
                for msg in replay:
                    yield sse_format("chat", msg.to_dict(), event_id=msg.msg_id)
                while True:
                    item = queue.get(timeout=heartbeat_s)
                    if item is None:
                        yield sse_format("heartbeat", {"t": runtime.now()})
                        continue
                    kind, payload = item
                    event_id = payload.get("msg_id") if kind == "chat" else None
                    yield sse_format(kind, payload, event_id=event_id)
            finally:
                session.unsubscribe(queue)

        return StreamingResponse(
            generate(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    @app.get("/api/mission/plan")
    def mission_plan():
        return plan_to_doc(runtime.store.plan)

    @app.get("/api/mission/progress")
    def mission_progress():
        p = runtime.store.mission_progress()
        return {
            "pct": p["pct"],
            "completed": p["completed"],
            "total": p["total"],
            "total_path_m": p["total_path_m"],
            "traversed_m": p["traversed_m"],
            "per_objective": {
                name: {
                    "status": prog.status.value,
                    "start_t": prog.start_t,
                    "finish_t": prog.finish_t,
                }
                for name, prog in p["per_objective"].items()
            },
        }

    return app


def mount_ui(app: FastAPI, ui_dir: str) -> None:
    if os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
