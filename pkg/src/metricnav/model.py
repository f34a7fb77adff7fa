"""Shared domain model: data sources, query conditions, intents, outcomes.

These types are plain immutable values passed between the interpreter,
the query engine, and session dispatch; nothing here touches I/O.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Union

from .timeparse import DateRange, ReferenceFrame, TimeOfDay

LB_TO_KG = 0.45359237


class DataSourceType(Enum):
    STEP_COUNT = "step_count"
    RESTING_HEART_RATE = "resting_heart_rate"
    SLEEP_RANGE = "sleep_range"
    HOURS_SLEPT = "hours_slept"
    WEIGHT = "weight"


SOURCE_LABELS = {
    DataSourceType.STEP_COUNT: "Step Count",
    DataSourceType.RESTING_HEART_RATE: "Resting Heart Rate",
    DataSourceType.SLEEP_RANGE: "Sleep Range",
    DataSourceType.HOURS_SLEPT: "Hours Slept",
    DataSourceType.WEIGHT: "Weight",
}


class CycleType(Enum):
    DAY_OF_WEEK = "day_of_week"      # Sunday .. Saturday
    MONTH_OF_YEAR = "month_of_year"  # January .. December


class Page(Enum):
    HOME = "home"
    DETAIL = "detail"
    TWO_RANGE = "two_range"
    CYCLICAL = "cyclical"


class Aspect(Enum):
    VALUE = "value"
    BEDTIME = "bedtime"
    WAKE_TIME = "wake_time"
    GOAL_REF = "goal_ref"


class Comparator(Enum):
    LT = "lt"
    LTE = "lte"
    GT = "gt"
    GTE = "gte"
    MIN = "min"
    MAX = "max"


THRESHOLD_COMPARATORS = (Comparator.LT, Comparator.LTE, Comparator.GT, Comparator.GTE)


@dataclass(frozen=True)
class Quantity:
    value: float
    unit: str | None = None  # steps, hours, minutes, bpm, kg, lb


Operand = Union[Quantity, TimeOfDay, None]


@dataclass(frozen=True)
class ConditionSpec:
    """A data-driven query condition over daily values.

    ``source`` may be None straight out of parameter extraction; intent
    inference resolves it from context before a RunQuery is produced.
    """

    aspect: Aspect
    source: DataSourceType | None
    comparator: Comparator
    operand: Operand = None


class InvalidReason(Enum):
    MISSING_PERIODS = "missing_periods"
    AMBIGUOUS_SLOT = "ambiguous_slot"
    UNSUPPORTED_ON_PAGE = "unsupported_on_page"
    INCOMPATIBLE_PARAMETER = "incompatible_parameter"
    UNKNOWN_DATA_SOURCE = "unknown_data_source"


def validate_condition(cond: ConditionSpec) -> str | None:
    """Check internal consistency; returns a problem description or None."""
    clock_aspect = cond.aspect in (Aspect.BEDTIME, Aspect.WAKE_TIME)
    if clock_aspect and cond.source is not DataSourceType.SLEEP_RANGE:
        return "bedtime and wake time only apply to the sleep range"
    if isinstance(cond.operand, TimeOfDay) and not clock_aspect:
        return "a clock time only applies to bedtime or wake time"
    if cond.comparator in (Comparator.MIN, Comparator.MAX):
        if cond.operand is not None:
            return "minimum/maximum queries take no operand"
        return None
    if cond.aspect is Aspect.GOAL_REF:
        if cond.source is not DataSourceType.STEP_COUNT:
            return "only the step goal is defined in the profile"
        if cond.comparator is not Comparator.GTE:
            return "goal queries check 'at least the goal'"
        return None
    if cond.comparator in THRESHOLD_COMPARATORS:
        if clock_aspect and not isinstance(cond.operand, TimeOfDay):
            return "bedtime/wake time comparisons need a clock time"
        if cond.aspect is Aspect.VALUE and not isinstance(cond.operand, Quantity):
            return "value comparisons need a number"
    if cond.aspect is Aspect.VALUE and cond.source is DataSourceType.SLEEP_RANGE:
        return "the sleep range has no single value; use bedtime or wake time"
    return None


class PressedKind(Enum):
    NONE = "none"
    START_DATE_LABEL = "start_date_label"
    END_DATE_LABEL = "end_date_label"
    AGGREGATION_PLOT = "aggregation_plot"
    DATA_SOURCE_LABEL = "data_source_label"


@dataclass(frozen=True)
class PressedElement:
    """The interface target held while an utterance was made."""

    kind: PressedKind = PressedKind.NONE
    slot: str | None = None  # "a" | "b" | cycle group id, plots only
    bound_value: DateRange | date | DataSourceType | None = None

    def __post_init__(self) -> None:
        if (self.slot is not None) != (self.kind is PressedKind.AGGREGATION_PLOT):
            raise ValueError("slot is set exactly for aggregation plots")


NOT_PRESSED = PressedElement()


@dataclass(frozen=True)
class InteractionContext:
    """Everything the interpreter may consult besides the utterance."""

    page: Page
    current_range: DateRange
    frame: ReferenceFrame
    current_source: DataSourceType | None = None
    comparison_ranges: tuple[DateRange, DateRange] | None = None
    cycle: CycleType | None = None
    pressed: PressedElement = NOT_PRESSED

    def __post_init__(self) -> None:
        if (self.comparison_ranges is not None) != (self.page is Page.TWO_RANGE):
            raise ValueError("comparison_ranges present exactly on the two-range page")
        if (self.cycle is not None) != (self.page is Page.CYCLICAL):
            raise ValueError("cycle present exactly on the cyclical page")


# ---------------------------------------------------------------------------
# intents


@dataclass(frozen=True)
class SetRange:
    range: DateRange


@dataclass(frozen=True)
class SetStartDate:
    date: date


@dataclass(frozen=True)
class SetEndDate:
    date: date


@dataclass(frozen=True)
class SetDataSource:
    source: DataSourceType


@dataclass(frozen=True)
class NavigateDetail:
    source: DataSourceType
    range: DateRange


@dataclass(frozen=True)
class CompareTwoRanges:
    source: DataSourceType
    range_a: DateRange
    range_b: DateRange
    source_defaulted: bool = False  # flagged in the confirmation message


@dataclass(frozen=True)
class ReplaceComparisonRange:
    slot: str
    range: DateRange


@dataclass(frozen=True)
class CompareCyclical:
    source: DataSourceType
    range: DateRange
    cycle: CycleType
    source_defaulted: bool = False


@dataclass(frozen=True)
class RunQuery:
    condition: ConditionSpec
    range: DateRange | None = None


@dataclass(frozen=True)
class EditQueryParam:
    index: int  # 0 = aspect, 1 = comparator, 2 = operand
    value: Aspect | Comparator | Quantity | TimeOfDay


@dataclass(frozen=True)
class DismissQuery:
    pass


@dataclass(frozen=True)
class GoHome:
    pass


@dataclass(frozen=True)
class Undo:
    pass


Intent = Union[
    SetRange, SetStartDate, SetEndDate, SetDataSource, NavigateDetail,
    CompareTwoRanges, ReplaceComparisonRange, CompareCyclical, RunQuery,
    EditQueryParam, DismissQuery, GoHome, Undo,
]


# ---------------------------------------------------------------------------
# interpreter outcome


@dataclass(frozen=True)
class Ok:
    intent: Intent


@dataclass(frozen=True)
class Invalid:
    reason: InvalidReason
    message: str
    suggestion: str | None = None


@dataclass(frozen=True)
class Unrecognized:
    text: str


InterpretOutcome = Union[Ok, Invalid, Unrecognized]
