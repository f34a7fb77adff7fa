"""JSON-over-HTTP service exposing sessions over one sealed dataset.

Sessions live in memory and evict after 30 idle minutes. Requests to the
same session are serialized with a per-session lock; distinct sessions
proceed in parallel. Application-level failures (an invalid command) are
HTTP 200 with invalid feedback; only transport problems get 4xx.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass
from datetime import date
from typing import Any, Callable

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .datastore import Dataset, get_range
from .lexicon import Lexicon
from .model import (
    Aspect,
    Comparator,
    CompareCyclical,
    CompareTwoRanges,
    CycleType,
    DataSourceType,
    DismissQuery,
    EditQueryParam,
    GoHome,
    Intent,
    NavigateDetail,
    PressedElement,
    PressedKind,
    Quantity,
    ReplaceComparisonRange,
    SetDataSource,
    SetEndDate,
    SetRange,
    SetStartDate,
    Undo,
)
from .session import Session
from .timeparse import DateRange, ReferenceFrame, TimeOfDay
from .views import build_state_view, feedback_json, range_json, records_json

SESSION_TTL_SECONDS = 30 * 60


class PressedBody(BaseModel):
    kind: str = "none"
    slot: str | None = None


class CommandBody(BaseModel):
    utterance: str
    pressed: PressedBody = PressedBody()


class IntentBody(BaseModel):
    type: str

    model_config = {"extra": "allow"}


@dataclass
class _Holder:
    session: Session
    lock: threading.Lock
    last_access: float


class SessionRegistry:
    def __init__(
        self,
        dataset: Dataset,
        frame: ReferenceFrame,
        lexicon: Lexicon | None,
        ttl: float,
        clock: Callable[[], float],
    ):
        self.dataset = dataset
        self.frame = frame
        self.lexicon = lexicon
        self.ttl = ttl
        self.clock = clock
        self._sessions: dict[str, _Holder] = {}
        self._lock = threading.Lock()

    def create(self) -> tuple[str, _Holder]:
        session_id = uuid.uuid4().hex
        holder = _Holder(
            session=Session(self.dataset, self.frame, self.lexicon),
            lock=threading.Lock(),
            last_access=self.clock(),
        )
        with self._lock:
            self._evict_stale()
            self._sessions[session_id] = holder
        return session_id, holder

    def get(self, session_id: str) -> _Holder:
        with self._lock:
            self._evict_stale()
            holder = self._sessions.get(session_id)
            if holder is None:
                raise HTTPException(status_code=404, detail="unknown session")
            holder.last_access = self.clock()
            return holder

    def _evict_stale(self) -> None:
        now = self.clock()
        stale = [
            sid
            for sid, holder in self._sessions.items()
            if now - holder.last_access > self.ttl
        ]
        for sid in stale:
            del self._sessions[sid]


def _parse_date_field(raw: Any, name: str) -> date:
    try:
        return date.fromisoformat(str(raw))
    except (TypeError, ValueError):
        raise HTTPException(status_code=400, detail=f"bad {name}: {raw!r}")


def _parse_range_field(raw: Any, name: str) -> DateRange:
    if not isinstance(raw, dict) or "start" not in raw or "end" not in raw:
        raise HTTPException(
            status_code=400, detail=f"{name} must be {{start, end}}"
        )
    start = _parse_date_field(raw["start"], f"{name}.start")
    end = _parse_date_field(raw["end"], f"{name}.end")
    if start > end:
        raise HTTPException(status_code=400, detail=f"{name} start after end")
    return DateRange(start, end)


def _parse_source_field(raw: Any) -> DataSourceType:
    try:
        return DataSourceType(str(raw))
    except ValueError:
        raise HTTPException(status_code=400, detail=f"unknown source {raw!r}")


def _parse_edit_value(raw: Any) -> Aspect | Comparator | Quantity | TimeOfDay:
    if isinstance(raw, dict):
        if "clock" in raw:
            try:
                hh, mm = str(raw["clock"]).split(":")
                return TimeOfDay(int(hh) * 60 + int(mm))
            except (ValueError, TypeError):
                raise HTTPException(status_code=400, detail="bad clock value")
        if "value" in raw:
            try:
                return Quantity(float(raw["value"]), raw.get("unit"))
            except (TypeError, ValueError):
                raise HTTPException(status_code=400, detail="bad operand value")
    if isinstance(raw, str):
        for enum_type in (Aspect, Comparator):
            try:
                return enum_type(raw)
            except ValueError:
                continue
    raise HTTPException(status_code=400, detail=f"bad edit value {raw!r}")


def parse_intent_body(body: IntentBody) -> Intent | tuple[str, Any]:
    """Wire intent to a typed Intent; swipes return a marker tuple."""
    extra = body.model_extra or {}
    kind = body.type
    if kind == "set_range":
        return SetRange(_parse_range_field(extra.get("range"), "range"))
    if kind == "set_start_date":
        return SetStartDate(_parse_date_field(extra.get("date"), "date"))
    if kind == "set_end_date":
        return SetEndDate(_parse_date_field(extra.get("date"), "date"))
    if kind == "set_source":
        return SetDataSource(_parse_source_field(extra.get("source")))
    if kind == "navigate_detail":
        return NavigateDetail(
            source=_parse_source_field(extra.get("source")),
            range=_parse_range_field(extra.get("range"), "range"),
        )
    if kind == "compare_two_ranges":
        return CompareTwoRanges(
            source=_parse_source_field(extra.get("source")),
            range_a=_parse_range_field(extra.get("range_a"), "range_a"),
            range_b=_parse_range_field(extra.get("range_b"), "range_b"),
        )
    if kind == "replace_comparison_range":
        slot = extra.get("slot")
        if slot not in ("a", "b"):
            raise HTTPException(status_code=400, detail="slot must be 'a' or 'b'")
        return ReplaceComparisonRange(
            slot=slot, range=_parse_range_field(extra.get("range"), "range")
        )
    if kind == "compare_cyclical":
        try:
            cycle = CycleType(str(extra.get("cycle")))
        except ValueError:
            raise HTTPException(status_code=400, detail="unknown cycle")
        return CompareCyclical(
            source=_parse_source_field(extra.get("source")),
            range=_parse_range_field(extra.get("range"), "range"),
            cycle=cycle,
        )
    if kind == "edit_query_param":
        index = extra.get("index")
        if index not in (0, 1, 2):
            raise HTTPException(status_code=400, detail="index must be 0, 1, or 2")
        return EditQueryParam(index=index, value=_parse_edit_value(extra.get("value")))
    if kind == "swipe":
        direction = extra.get("direction")
        if direction not in ("back", "forward"):
            raise HTTPException(
                status_code=400, detail="direction must be back or forward"
            )
        return ("swipe", direction)
    if kind == "undo":
        return Undo()
    if kind == "dismiss_query":
        return DismissQuery()
    if kind == "go_home":
        return GoHome()
    raise HTTPException(status_code=400, detail=f"unknown intent type {kind!r}")


def _parse_pressed(body: PressedBody, session: Session) -> PressedElement:
    try:
        kind = PressedKind(body.kind)
    except ValueError:
        raise HTTPException(status_code=400, detail=f"unknown pressed kind {body.kind!r}")
    if kind is PressedKind.NONE:
        return PressedElement()
    state = session.state
    if kind is PressedKind.START_DATE_LABEL:
        return PressedElement(kind, bound_value=state.range.start)
    if kind is PressedKind.END_DATE_LABEL:
        return PressedElement(kind, bound_value=state.range.end)
    if kind is PressedKind.AGGREGATION_PLOT:
        slot = body.slot
        if slot not in ("a", "b"):
            raise HTTPException(status_code=400, detail="plot slot must be 'a' or 'b'")
        bound = None
        if state.comparison is not None:
            bound = state.comparison[0 if slot == "a" else 1]
        return PressedElement(kind, slot=slot, bound_value=bound)
    return PressedElement(kind, bound_value=state.source)


def create_app(
    dataset: Dataset,
    frame: ReferenceFrame,
    lexicon: Lexicon | None = None,
    session_ttl: float = SESSION_TTL_SECONDS,
    clock: Callable[[], float] = time.monotonic,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="metricnav", version="0.1.0")
    registry = SessionRegistry(dataset, frame, lexicon, session_ttl, clock)
    app.state.registry = registry

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.post("/api/sessions")
    def create_session() -> dict:
        session_id, holder = registry.create()
        with holder.lock:
            return {
                "session_id": session_id,
                "state": build_state_view(holder.session),
            }

    @app.get("/api/sessions/{session_id}/state")
    def get_state(session_id: str) -> dict:
        holder = registry.get(session_id)
        with holder.lock:
            return {"state": build_state_view(holder.session)}

    @app.post("/api/sessions/{session_id}/command")
    def post_command(session_id: str, body: CommandBody) -> dict:
        holder = registry.get(session_id)
        with holder.lock:
            pressed = _parse_pressed(body.pressed, holder.session)
            feedback = holder.session.handle_utterance(body.utterance, pressed)
            return {
                "feedback": feedback_json(feedback),
                "state": build_state_view(holder.session),
            }

    @app.post("/api/sessions/{session_id}/intent")
    def post_intent(session_id: str, body: IntentBody) -> dict:
        holder = registry.get(session_id)
        parsed = parse_intent_body(body)
        with holder.lock:
            if isinstance(parsed, tuple):
                feedback = holder.session.swipe_range(parsed[1])
            else:
                feedback = holder.session.dispatch(parsed)
            return {
                "feedback": feedback_json(feedback),
                "state": build_state_view(holder.session),
            }

    @app.get("/api/data/{source}")
    def get_data(source: str, start: str, end: str) -> dict:
        try:
            src = DataSourceType(source)
        except ValueError:
            raise HTTPException(status_code=404, detail=f"unknown source {source!r}")
        start_day = _parse_date_field(start, "start")
        end_day = _parse_date_field(end, "end")
        if start_day > end_day:
            raise HTTPException(status_code=400, detail="start after end")
        rng = DateRange(start_day, end_day)
        return {
            "source": src.value,
            "records": records_json(get_range(dataset, src, rng)),
        }

    @app.get("/api/meta")
    def get_meta() -> dict:
        return {
            "sources": [s.value for s in DataSourceType],
            "coverage": {
                source.value: (None if rng is None else range_json(rng))
                for source, rng in dataset.coverage.items()
            },
            "profile": {
                "step_goal": dataset.profile.step_goal,
                "weight_unit_display": dataset.profile.weight_unit_display,
            },
            "reference_date": frame.reference_date.isoformat(),
        }

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
