"""Mutable exploration state: pages, ranges, the active query, and undo.

A session owns one user's exploration of one sealed dataset. All mutation
goes through ``dispatch`` (or the touch helpers), every successful
transition snapshots the prior state onto a bounded undo stack, and a
failed transition leaves the state untouched. Sessions are single-owner:
callers serialize access externally.
"""

from __future__ import annotations

import calendar
from collections import deque
from dataclasses import dataclass, replace
from datetime import timedelta
from typing import Union

from . import interpreter, queryengine
from .datastore import Dataset
from .lexicon import Lexicon
from .model import (
    Aspect,
    Comparator,
    CompareCyclical,
    CompareTwoRanges,
    ConditionSpec,
    CycleType,
    DataSourceType,
    DismissQuery,
    EditQueryParam,
    GoHome,
    Intent,
    InteractionContext,
    InterpretOutcome,
    Invalid,
    InvalidReason,
    NavigateDetail,
    Ok,
    Page,
    PressedElement,
    Quantity,
    ReplaceComparisonRange,
    RunQuery,
    SetDataSource,
    SetEndDate,
    SetRange,
    SetStartDate,
    SOURCE_LABELS,
    Undo,
    validate_condition,
    NOT_PRESSED,
)
from .queryengine import HighlightResult
from .timeparse import DateRange, ReferenceFrame, TimeOfDay, month_range, year_range

UNDO_LIMIT = 128


@dataclass(frozen=True)
class ExplorationState:
    page: Page
    range: DateRange
    frame: ReferenceFrame
    source: DataSourceType | None = None
    comparison: tuple[DateRange, DateRange] | None = None
    cycle: CycleType | None = None
    active_query: HighlightResult | None = None


@dataclass(frozen=True)
class Executed:
    summary: str
    undoable: bool = True


@dataclass(frozen=True)
class InvalidDialog:
    message: str
    suggestion: str | None = None
    reason: InvalidReason | None = None


@dataclass(frozen=True)
class UnrecognizedNotice:
    text: str


Feedback = Union[Executed, InvalidDialog, UnrecognizedNotice]


@dataclass(frozen=True)
class UndoEntry:
    prior: ExplorationState
    label: str


def initial_state(frame: ReferenceFrame) -> ExplorationState:
    """Home page showing the last 7 days ending at the reference date."""
    ref = frame.reference_date
    return ExplorationState(
        page=Page.HOME,
        range=DateRange(ref - timedelta(days=6), ref),
        frame=frame,
    )


def _fmt_range(rng: DateRange) -> str:
    return f"{rng.start.isoformat()} to {rng.end.isoformat()}"


def _fmt_operand(operand) -> str:
    if operand is None:
        return ""
    if isinstance(operand, TimeOfDay):
        return operand.fmt()
    if operand.value == int(operand.value):
        text = str(int(operand.value))
    else:
        text = str(operand.value)
    return f"{text} {operand.unit}" if operand.unit else text


_ASPECT_LABELS = {
    Aspect.VALUE: "value",
    Aspect.BEDTIME: "bedtime",
    Aspect.WAKE_TIME: "wake time",
    Aspect.GOAL_REF: "step goal",
}

_COMPARATOR_LABELS = {
    Comparator.LT: "earlier than",
    Comparator.GT: "later than",
    Comparator.LTE: "at most",
    Comparator.GTE: "at least",
    Comparator.MIN: "minimum",
    Comparator.MAX: "maximum",
}

_VALUE_COMPARATOR_LABELS = {
    Comparator.LT: "less than",
    Comparator.GT: "more than",
    Comparator.LTE: "at most",
    Comparator.GTE: "at least",
    Comparator.MIN: "minimum",
    Comparator.MAX: "maximum",
}


def describe_condition(cond: ConditionSpec) -> str:
    source = SOURCE_LABELS[cond.source] if cond.source else "?"
    if cond.aspect is Aspect.GOAL_REF:
        return f"{source} meeting the step goal"
    clockish = cond.aspect in (Aspect.BEDTIME, Aspect.WAKE_TIME)
    labels = _COMPARATOR_LABELS if clockish else _VALUE_COMPARATOR_LABELS
    subject = (
        _ASPECT_LABELS[cond.aspect] if clockish else source.lower()
    )
    text = f"{subject} {labels[cond.comparator]}"
    operand = _fmt_operand(cond.operand)
    return f"{text} {operand}".strip()


class Session:
    """One exploration session over a sealed dataset."""

    def __init__(
        self,
        dataset: Dataset,
        frame: ReferenceFrame,
        lexicon: Lexicon | None = None,
    ):
        self.dataset = dataset
        self.frame = frame
        self.lexicon = lexicon
        self.state = initial_state(frame)
        self._undo: deque[UndoEntry] = deque(maxlen=UNDO_LIMIT)

    # -- helpers

    def _commit(self, new_state: ExplorationState, summary: str) -> Feedback:
        self._undo.append(UndoEntry(prior=self.state, label=summary))
        self.state = new_state
        return Executed(summary)

    def _refresh_query(self, state: ExplorationState) -> ExplorationState:
        """Re-evaluate the active query over the state's current range."""
        if state.active_query is None:
            return state
        if state.page in (Page.TWO_RANGE, Page.CYCLICAL):
            return replace(state, active_query=None)
        result = queryengine.run_highlight_query(
            self.dataset,
            state.active_query.condition,
            state.range,
            self.dataset.profile,
        )
        return replace(state, active_query=result)

    def context(self, pressed: PressedElement = NOT_PRESSED) -> InteractionContext:
        state = self.state
        return InteractionContext(
            page=state.page,
            current_range=state.range,
            frame=state.frame,
            current_source=state.source,
            comparison_ranges=state.comparison,
            cycle=state.cycle,
            pressed=pressed,
        )

    # -- entry points

    def handle_utterance(
        self, text: str, pressed: PressedElement = NOT_PRESSED
    ) -> Feedback:
        outcome: InterpretOutcome = interpreter.interpret(
            text, self.context(pressed), self.lexicon
        )
        if isinstance(outcome, Ok):
            return self.dispatch(outcome.intent)
        if isinstance(outcome, Invalid):
            return InvalidDialog(outcome.message, outcome.suggestion, outcome.reason)
        return UnrecognizedNotice(outcome.text)

    def dispatch(self, intent: Intent) -> Feedback:
        state = self.state
        if isinstance(intent, SetRange):
            new = replace(state, range=intent.range)
            return self._commit(
                self._refresh_query(new), f"Range set to {_fmt_range(intent.range)}"
            )
        if isinstance(intent, SetStartDate):
            if intent.date > state.range.end:
                return InvalidDialog(
                    "The start date cannot be after the end date.",
                    reason=InvalidReason.INCOMPATIBLE_PARAMETER,
                )
            new = replace(state, range=DateRange(intent.date, state.range.end))
            return self._commit(
                self._refresh_query(new),
                f"Start date set to {intent.date.isoformat()}",
            )
        if isinstance(intent, SetEndDate):
            if intent.date < state.range.start:
                return InvalidDialog(
                    "The end date cannot be before the start date.",
                    reason=InvalidReason.INCOMPATIBLE_PARAMETER,
                )
            new = replace(state, range=DateRange(state.range.start, intent.date))
            return self._commit(
                self._refresh_query(new),
                f"End date set to {intent.date.isoformat()}",
            )
        if isinstance(intent, SetDataSource):
            return self._set_source(intent.source)
        if isinstance(intent, NavigateDetail):
            new = replace(
                state,
                page=Page.DETAIL,
                source=intent.source,
                range=intent.range,
                comparison=None,
                cycle=None,
            )
            return self._commit(
                self._refresh_query(new),
                f"Showing {SOURCE_LABELS[intent.source]} for {_fmt_range(intent.range)}",
            )
        if isinstance(intent, CompareTwoRanges):
            new = replace(
                state,
                page=Page.TWO_RANGE,
                source=intent.source,
                comparison=(intent.range_a, intent.range_b),
                cycle=None,
                active_query=None,  # queries are unsupported on comparison pages
            )
            label = SOURCE_LABELS[intent.source]
            if intent.source_defaulted:
                label += " (defaulted)"
            return self._commit(
                new,
                f"Comparing {label}: {_fmt_range(intent.range_a)}"
                f" vs {_fmt_range(intent.range_b)}",
            )
        if isinstance(intent, ReplaceComparisonRange):
            if state.page is not Page.TWO_RANGE or intent.slot not in ("a", "b"):
                return InvalidDialog(
                    "There is no comparison period to replace here.",
                    reason=InvalidReason.UNSUPPORTED_ON_PAGE,
                )
            range_a, range_b = state.comparison
            if intent.slot == "a":
                range_a = intent.range
            else:
                range_b = intent.range
            new = replace(state, comparison=(range_a, range_b))
            return self._commit(
                new,
                f"Comparison period {intent.slot.upper()} set to"
                f" {_fmt_range(intent.range)}",
            )
        if isinstance(intent, CompareCyclical):
            new = replace(
                state,
                page=Page.CYCLICAL,
                source=intent.source,
                range=intent.range,
                comparison=None,
                cycle=intent.cycle,
                active_query=None,
            )
            cycle_label = (
                "day of the week"
                if intent.cycle is CycleType.DAY_OF_WEEK
                else "month of the year"
            )
            label = SOURCE_LABELS[intent.source]
            if intent.source_defaulted:
                label += " (defaulted)"
            return self._commit(
                new,
                f"Showing {label} for {_fmt_range(intent.range)} by {cycle_label}",
            )
        if isinstance(intent, RunQuery):
            return self._run_query(intent)
        if isinstance(intent, EditQueryParam):
            return self.edit_query_param(intent.index, intent.value)
        if isinstance(intent, DismissQuery):
            if state.active_query is None:
                return Executed("No active query.", undoable=False)
            new = replace(state, active_query=None)
            return self._commit(new, "Query dismissed")
        if isinstance(intent, GoHome):
            new = replace(
                state, page=Page.HOME, source=None, comparison=None, cycle=None
            )
            return self._commit(self._refresh_query(new), "Home")
        if isinstance(intent, Undo):
            return self.undo()
        return InvalidDialog(
            f"Unsupported intent {type(intent).__name__}.",
            reason=InvalidReason.UNSUPPORTED_ON_PAGE,
        )

    def _set_source(self, source: DataSourceType) -> Feedback:
        state = self.state
        if state.page in (Page.HOME, Page.DETAIL):
            new = replace(state, page=Page.DETAIL, source=source)
        else:
            # comparison pages re-aggregate in place for the new source
            new = replace(state, source=source)
        return self._commit(
            self._refresh_query(new), f"Data source set to {SOURCE_LABELS[source]}"
        )

    def _run_query(self, intent: RunQuery) -> Feedback:
        state = self.state
        cond = queryengine.bind_goal(intent.condition, self.dataset.profile)
        if (problem := validate_condition(cond)) is not None:
            return InvalidDialog(
                problem.capitalize() + ".",
                reason=InvalidReason.INCOMPATIBLE_PARAMETER,
            )
        new_range = intent.range or state.range
        page, source = state.page, state.source
        if page is Page.HOME:
            pass  # the home page shows every source; highlights land in place
        elif page is Page.DETAIL:
            source = cond.source
        else:
            page, source = Page.DETAIL, cond.source
        result = queryengine.run_highlight_query(
            self.dataset, cond, new_range, self.dataset.profile
        )
        new = replace(
            state,
            page=page,
            source=source,
            range=new_range,
            comparison=None,
            cycle=None,
            active_query=result,
        )
        return self._commit(
            new,
            f"Highlighting days with {describe_condition(cond)}:"
            f" {result.count} days",
        )

    def swipe_range(self, direction: str) -> Feedback:
        """Shift the visible range (or both compared ranges) by one step.

        Swipes are navigation, not commands: they do not join the undo
        stack, mirroring how repeated swiping is used to skim.
        """
        if direction not in ("back", "forward"):
            raise ValueError(f"direction must be back or forward, got {direction!r}")
        state = self.state
        if state.page is Page.TWO_RANGE:
            range_a, range_b = state.comparison
            new = replace(
                state,
                comparison=(
                    _shift(range_a, direction),
                    _shift(range_b, direction),
                ),
            )
            self.state = new
            return Executed("Comparison shifted " + direction, undoable=False)
        new_range = _shift(state.range, direction)
        new = self._refresh_query(replace(state, range=new_range))
        self.state = new
        return Executed(f"Range moved to {_fmt_range(new_range)}", undoable=False)

    def undo(self) -> Feedback:
        if not self._undo:
            return InvalidDialog("Nothing to undo.")
        entry = self._undo.pop()
        self.state = entry.prior
        return Executed(f"Undid: {entry.label}", undoable=False)

    def edit_query_param(self, index: int, value) -> Feedback:
        """Edit one recognized query parameter (0 aspect, 1 comparator, 2 operand)."""
        state = self.state
        if state.active_query is None:
            return InvalidDialog(
                "There is no active query to edit.",
                reason=InvalidReason.UNSUPPORTED_ON_PAGE,
            )
        cond = state.active_query.condition
        if index == 0:
            if not isinstance(value, Aspect):
                return self._incompatible("an aspect")
            new_cond = replace(cond, aspect=value)
            if value in (Aspect.BEDTIME, Aspect.WAKE_TIME):
                new_cond = replace(new_cond, source=DataSourceType.SLEEP_RANGE)
            if value is Aspect.GOAL_REF:
                new_cond = replace(
                    new_cond,
                    source=DataSourceType.STEP_COUNT,
                    comparator=Comparator.GTE,
                    operand=None,
                )
        elif index == 1:
            if not isinstance(value, Comparator):
                return self._incompatible("a comparator")
            new_cond = replace(cond, comparator=value)
            if value in (Comparator.MIN, Comparator.MAX):
                new_cond = replace(new_cond, operand=None)
        elif index == 2:
            if not isinstance(value, (Quantity, TimeOfDay)):
                return self._incompatible("a number or clock time")
            new_cond = replace(cond, operand=value)
        else:
            return self._incompatible("a known parameter index")
        new_cond = queryengine.bind_goal(new_cond, self.dataset.profile)
        if (problem := validate_condition(new_cond)) is not None:
            return InvalidDialog(
                problem.capitalize() + ".",
                reason=InvalidReason.INCOMPATIBLE_PARAMETER,
            )
        result = queryengine.run_highlight_query(
            self.dataset, new_cond, state.active_query.evaluated_range,
            self.dataset.profile,
        )
        new = replace(state, active_query=result)
        return self._commit(
            new,
            f"Query updated to {describe_condition(new_cond)}: {result.count} days",
        )

    def _incompatible(self, expected: str) -> Feedback:
        return InvalidDialog(
            f"That edit needs {expected}.",
            reason=InvalidReason.INCOMPATIBLE_PARAMETER,
        )


def _shift(rng: DateRange, direction: str) -> DateRange:
    """Shift by the range's own length; whole months/years stay aligned."""
    sign = -1 if direction == "back" else 1
    if _is_whole_month(rng):
        anchor = rng.start
        month_index = anchor.year * 12 + (anchor.month - 1) + sign
        year, month = divmod(month_index, 12)
        return month_range(year, month + 1)
    if _is_whole_year(rng):
        return year_range(rng.start.year + sign)
    length = rng.days
    delta = timedelta(days=sign * length)
    return DateRange(rng.start + delta, rng.end + delta)


def _is_whole_month(rng: DateRange) -> bool:
    return (
        rng.start.day == 1
        and rng.start.year == rng.end.year
        and rng.start.month == rng.end.month
        and rng.end.day == calendar.monthrange(rng.end.year, rng.end.month)[1]
    )


def _is_whole_year(rng: DateRange) -> bool:
    return (
        rng.start.month == 1
        and rng.start.day == 1
        and rng.end.month == 12
        and rng.end.day == 31
        and rng.start.year == rng.end.year
    )
