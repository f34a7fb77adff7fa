"""Serialize session state for transport: one JSON-shaped view per page.

The view is re-derived from the session on every read, so any front end
rendering only from it stays consistent with the engine. Field names are
frozen in docs/api.md; change them there first.
"""

from __future__ import annotations

from typing import Any

from . import queryengine
from .datastore import Dataset, SleepRecord, get_range
from .model import DataSourceType, Page, SOURCE_LABELS
from .queryengine import AggregateStats, SleepAggregate, Stats, group_label
from .session import (
    Executed,
    Feedback,
    InvalidDialog,
    Session,
    describe_condition,
)
from .timeparse import DateRange, TimeOfDay


def range_json(rng: DateRange) -> dict[str, str]:
    return {"start": rng.start.isoformat(), "end": rng.end.isoformat()}


def stats_json(stats: Stats) -> dict[str, Any]:
    if isinstance(stats, SleepAggregate):
        out: dict[str, Any] = {"n": stats.n}
        for name, triple in (("bedtime", stats.bedtime), ("waketime", stats.waketime)):
            out[name] = (
                None
                if triple is None
                else {
                    "avg": triple.avg,
                    "earliest": triple.earliest,
                    "latest": triple.latest,
                }
            )
        return out
    assert isinstance(stats, AggregateStats)
    out = {"n": stats.n, "avg": stats.avg, "min": stats.min, "max": stats.max}
    if stats.sum is not None:
        out["sum"] = stats.sum
    return out


def records_json(records: list) -> list[dict[str, Any]]:
    out = []
    for rec in records:
        if isinstance(rec, SleepRecord):
            out.append(
                {
                    "date": rec.date.isoformat(),
                    "bedtime": rec.bedtime,
                    "waketime": rec.waketime,
                }
            )
        else:
            out.append({"date": rec.date.isoformat(), "value": rec.value})
    return out


def operand_json(operand) -> Any:
    if operand is None:
        return None
    if isinstance(operand, TimeOfDay):
        return {"clock": operand.fmt()}
    return {"value": operand.value, "unit": operand.unit}


def query_json(session: Session) -> dict[str, Any] | None:
    query = session.state.active_query
    if query is None:
        return None
    cond = query.condition
    return {
        "aspect": cond.aspect.value,
        "source": cond.source.value,
        "comparator": cond.comparator.value,
        "operand": operand_json(cond.operand),
        "description": describe_condition(cond),
        "range": range_json(query.evaluated_range),
        "count": query.count,
        "dates": sorted(d.isoformat() for d in query.dates),
    }


def build_state_view(session: Session) -> dict[str, Any]:
    """Full page payload: state, charts, stats, and the query bar."""
    state = session.state
    dataset: Dataset = session.dataset
    view: dict[str, Any] = {
        "page": state.page.value,
        "range": range_json(state.range),
        "source": state.source.value if state.source else None,
        "reference_date": state.frame.reference_date.isoformat(),
        "comparison": None,
        "cycle": None,
        "query": query_json(session),
        "charts": {},
    }
    if state.page is Page.HOME:
        view["charts"] = {
            source.value: records_json(get_range(dataset, source, state.range))
            for source in DataSourceType
        }
    elif state.page is Page.DETAIL:
        source = state.source
        view["charts"] = {
            source.value: records_json(get_range(dataset, source, state.range))
        }
        view["stats"] = stats_json(queryengine.aggregate(dataset, source, state.range))
    elif state.page is Page.TWO_RANGE:
        range_a, range_b = state.comparison
        result = queryengine.compare_two_ranges(
            dataset, state.source, range_a, range_b
        )
        view["comparison"] = {
            "source": state.source.value,
            "range_a": range_json(range_a),
            "range_b": range_json(range_b),
            "stats_a": stats_json(result.stats_a),
            "stats_b": stats_json(result.stats_b),
        }
    elif state.page is Page.CYCLICAL:
        result = queryengine.compare_cyclical(
            dataset, state.source, state.range, state.cycle
        )
        view["cycle"] = {
            "source": state.source.value,
            "cycle": state.cycle.value,
            "range": range_json(state.range),
            "groups": [
                {
                    "id": gid,
                    "label": group_label(state.cycle, gid),
                    "stats": stats_json(stats),
                }
                for gid, stats in result.groups
            ],
        }
    return view


def feedback_json(feedback: Feedback) -> dict[str, Any]:
    if isinstance(feedback, Executed):
        return {
            "kind": "executed",
            "message": feedback.summary,
            "undoable": feedback.undoable,
        }
    if isinstance(feedback, InvalidDialog):
        return {
            "kind": "invalid",
            "message": feedback.message,
            "suggestion": feedback.suggestion,
            "reason": feedback.reason.value if feedback.reason else None,
        }
    return {"kind": "unrecognized", "message": f"Could not understand: {feedback.text!r}"}


def render_feedback_text(feedback: Feedback) -> str:
    if isinstance(feedback, Executed):
        undo = " (undo available)" if feedback.undoable else ""
        return f"ok: {feedback.summary}{undo}"
    if isinstance(feedback, InvalidDialog):
        text = f"invalid: {feedback.message}"
        if feedback.suggestion:
            text += f" Suggestion: {feedback.suggestion}"
        return text
    return f"unrecognized: {feedback.text!r}"


def render_state_text(session: Session) -> str:
    """Short human-readable summary printed by the REPL after each command."""
    state = session.state
    lines = [f"[{state.page.value}] {state.range.start} .. {state.range.end}"]
    if state.source is not None:
        lines[0] += f" | {SOURCE_LABELS[state.source]}"
    if state.page is Page.TWO_RANGE:
        range_a, range_b = state.comparison
        lines.append(
            f"  compare A: {range_a.start} .. {range_a.end}"
            f"  B: {range_b.start} .. {range_b.end}"
        )
    if state.page is Page.CYCLICAL:
        label = "Sun..Sat" if state.cycle.value == "day_of_week" else "Jan..Dec"
        lines.append(f"  grouped by {state.cycle.value} ({label})")
    query = state.active_query
    if query is not None:
        cond = query.condition
        operand = operand_json(cond.operand)
        operand_text = (
            ""
            if operand is None
            else " | " + (operand.get("clock") or _plain_number(operand))
        )
        lines.append(
            f"  query: {SOURCE_LABELS[cond.source]}"
            f" | {cond.aspect.value} | {cond.comparator.value}{operand_text}"
            f" | {query.count} days"
        )
    return "\n".join(lines)


def _plain_number(operand: dict) -> str:
    value = operand["value"]
    text = str(int(value)) if value == int(value) else str(value)
    return f"{text} {operand['unit']}" if operand.get("unit") else text
