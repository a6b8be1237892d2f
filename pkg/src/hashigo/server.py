"""HTTP gateway for the drawing UI: sessions, live stroke status, grading,
report cards, and an append-only attempt log."""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse

from .config import config_fingerprint
from .constraints import ToleranceProfile
from .dsl import ShapeLibrary, serialize_description
from .ink import InkError, InkPoint, InkStroke, Sketch, load_ink
from .recognizer import incremental_status
from .segmenter import DegenerateStrokeError, SegmenterConfig, segment
from .serialize import attempt_to_record, critique_to_dict, report_card_to_dict
from .tutor import MessageCatalog, Session, TutorEngine, load_lessons, next_prompt, report


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


def _error_body(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}


def create_app(lib: ShapeLibrary, lessons_dir, data_dir: Path,
               tol: ToleranceProfile = ToleranceProfile(),
               seg_cfg: SegmenterConfig = SegmenterConfig(),
               config_mapping: dict | None = None) -> FastAPI:
    app = FastAPI(title="kanji sketch tutor")
    lessons = load_lessons(lessons_dir, lib)
    engine = TutorEngine(lib, tol, seg_cfg, MessageCatalog.load())
    fingerprint = config_fingerprint(config_mapping or {}, tol, seg_cfg)

    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    log_path = data_dir / "attempts.ndjson"
    log_lock = threading.Lock()

    sessions: dict = {}
    stroke_buffers: dict = {}  # session id -> list of InkStroke for the current item
    state_lock = threading.Lock()

    def append_log(record: dict):
        with log_lock:
            with log_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise ApiError(404, "sessionNotFound", f"no session {session_id!r}")
        return session

    def prompt_payload(session: Session) -> dict | None:
        item = next_prompt(session)
        if item is None:
            return None
        return {
            "itemIndex": session.current_index,
            "shapeName": item.shape_name,
            "glyph": item.display_glyph,
            "meaning": item.meaning,
            "progress": {"current": session.current_index, "total": len(session.lesson.items)},
        }

    @app.exception_handler(ApiError)
    async def handle_api_error(_request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=_error_body(exc.code, exc.message))

    @app.exception_handler(RequestValidationError)
    async def handle_validation(_request, exc):
        return JSONResponse(status_code=400, content=_error_body("badRequest", str(exc)))

    @app.get("/api/lessons")
    def list_lessons():
        return [
            {
                "id": lesson.id,
                "title": lesson.title,
                "mode": lesson.mode,
                "items": [
                    {"shapeName": i.shape_name, "glyph": i.display_glyph, "meaning": i.meaning}
                    for i in lesson.items
                ],
            }
            for lesson in sorted(lessons.values(), key=lambda l: l.id)
        ]

    @app.get("/api/shapes/{name}")
    def shape_text(name: str):
        if name not in lib:
            raise ApiError(404, "shapeNotFound", f"no shape {name!r}")
        return PlainTextResponse(serialize_description(lib[name]))

    @app.post("/api/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        lesson_id = payload.get("lessonId")
        if lesson_id not in lessons:
            raise ApiError(404, "lessonNotFound", f"no lesson {lesson_id!r}")
        session = Session(uuid.uuid4().hex, lessons[lesson_id])
        with state_lock:
            sessions[session.id] = session
            stroke_buffers[session.id] = []
        return {"sessionId": session.id, "prompt": prompt_payload(session)}

    @app.get("/api/sessions/{session_id}/prompt")
    def get_prompt(session_id: str):
        session = get_session(session_id)
        payload = prompt_payload(session)
        return {"prompt": payload, "done": payload is None}

    @app.post("/api/sessions/{session_id}/strokes")
    def post_stroke(session_id: str, payload: dict = Body(...)):
        session = get_session(session_id)
        item = next_prompt(session)
        if item is None:
            raise ApiError(409, "lessonFinished", "no current prompt to draw for")
        points = payload.get("points")
        if not isinstance(points, list) or len(points) < 2:
            raise ApiError(400, "badStroke", "stroke needs a 'points' list of at least 2 [x,y,t] samples")
        with state_lock:
            buffer = stroke_buffers[session_id]
            try:
                pts = tuple(InkPoint(float(x), float(y), int(t)) for x, y, t in points)
                buffer.append(InkStroke(len(buffer), pts))
                sketch = Sketch(tuple(buffer), float(payload.get("canvasW", 400)),
                                float(payload.get("canvasH", 400)))
                primitives = segment(sketch, seg_cfg).primitives
            except (InkError, DegenerateStrokeError, ValueError, TypeError) as e:
                buffer and buffer.pop()
                raise ApiError(400, "badStroke", str(e)) from e
        status = incremental_status(primitives, item.shape_name, lib, tol)
        return {"status": status, "strokeCount": len(primitives)}

    @app.post("/api/sessions/{session_id}/submit")
    def submit(session_id: str, payload: dict = Body(...)):
        session = get_session(session_id)
        item = next_prompt(session)
        if item is None:
            raise ApiError(409, "lessonFinished", "lesson already completed")
        try:
            sketch = load_ink(json.dumps(payload))
        except InkError as e:
            raise ApiError(400, "badInk", str(e)) from e
        idx = session.current_index
        items = session.lesson.items
        upcoming = items[idx + 1] if idx + 1 < len(items) else None
        attempt, crit = engine.grade_attempt(sketch, item, session.id, idx, upcoming)
        with state_lock:
            session.record(attempt)
            stroke_buffers[session_id] = []
        append_log(attempt_to_record(attempt, item.shape_name, fingerprint))
        return critique_to_dict(crit)

    @app.post("/api/sessions/{session_id}/next")
    def advance(session_id: str):
        session = get_session(session_id)
        with state_lock:
            session.advance()
            stroke_buffers[session_id] = []
        payload = prompt_payload(session)
        return {"prompt": payload, "done": payload is None}

    @app.get("/api/sessions/{session_id}/report")
    def session_report(session_id: str):
        session = get_session(session_id)
        return report_card_to_dict(report(session))

    return app
