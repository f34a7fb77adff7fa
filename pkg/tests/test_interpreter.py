from __future__ import annotations

from datetime import date

import pytest

from metricnav.interpreter import (
    ParameterSet,
    extract_parameters,
    infer_intent,
    interpret,
    normalize,
)
from metricnav.model import (
    Aspect,
    Comparator,
    CompareCyclical,
    CompareTwoRanges,
    ConditionSpec,
    CycleType,
    DataSourceType,
    InteractionContext,
    Invalid,
    InvalidReason,
    NavigateDetail,
    Ok,
    Page,
    PressedElement,
    PressedKind,
    Quantity,
    RunQuery,
    SetDataSource,
    SetEndDate,
    SetRange,
    SetStartDate,
    Unrecognized,
)
from metricnav.timeparse import DateRange, ReferenceFrame, TimeOfDay, month_range

REF = date(2020, 8, 27)
FRAME = ReferenceFrame(REF)
HOME_RANGE = DateRange(date(2020, 8, 21), REF)
AUG_2020 = month_range(2020, 8)
AUG_2019 = month_range(2019, 8)


def home(pressed: PressedElement = PressedElement()) -> InteractionContext:
    return InteractionContext(
        page=Page.HOME, current_range=HOME_RANGE, frame=FRAME, pressed=pressed
    )


def detail(
    source: DataSourceType,
    rng: DateRange = AUG_2020,
    pressed: PressedElement = PressedElement(),
) -> InteractionContext:
    return InteractionContext(
        page=Page.DETAIL,
        current_range=rng,
        frame=FRAME,
        current_source=source,
        pressed=pressed,
    )


def two_range(
    ranges: tuple[DateRange, DateRange] = (AUG_2019, AUG_2020),
    source: DataSourceType = DataSourceType.SLEEP_RANGE,
    pressed: PressedElement = PressedElement(),
) -> InteractionContext:
    return InteractionContext(
        page=Page.TWO_RANGE,
        current_range=AUG_2020,
        frame=FRAME,
        current_source=source,
        comparison_ranges=ranges,
        pressed=pressed,
    )


def plot(slot: str, bound: DateRange) -> PressedElement:
    return PressedElement(PressedKind.AGGREGATION_PLOT, slot=slot, bound_value=bound)


# -- normalize ---------------------------------------------------------------

def test_normalize_collapses_numbers_and_tags():
    tokens = normalize("Days I walked more than 10,000 steps")
    norms = [t.norm for t in tokens]
    assert norms == ["days", "i", "walked", "more", "than", "10,000", "steps"]
    by_norm = {t.norm: t for t in tokens}
    assert by_norm["10,000"].num == 10000
    assert "condverb:step_count" in by_norm["walked"].tags
    assert "source:step_count" in by_norm["steps"].tags


def test_normalize_spelled_numbers():
    tokens = normalize("ten thousand")
    assert len(tokens.items) == 1
    assert tokens.items[0].num == 10000


def test_normalize_cycle_and_source_tags():
    tokens = normalize("Show me sleep by month for 2020")
    by_norm = {t.norm: t for t in tokens}
    assert "verb:show" in by_norm["show"].tags
    assert "source:sleep_range" in by_norm["sleep"].tags
    assert "cycle:month_of_year" in by_norm["month"].tags


# -- extract_parameters ------------------------------------------------------

def params_for(text: str) -> ParameterSet:
    return extract_parameters(normalize(text), FRAME)


def test_extract_wake_time_condition():
    params = params_for("Days I woke up earlier than 7:30 AM")
    assert params.condition == ConditionSpec(
        Aspect.WAKE_TIME, DataSourceType.SLEEP_RANGE, Comparator.LT, TimeOfDay(450)
    )
    assert params.entities == []  # the clock operand is consumed


def test_extract_max_condition_keeps_scope_range():
    params = params_for("Maximum step count last month")
    assert params.condition == ConditionSpec(
        Aspect.VALUE, DataSourceType.STEP_COUNT, Comparator.MAX, None
    )
    assert [e.value for e in params.entities] == [month_range(2020, 7)]


def test_extract_hours_condition():
    params = params_for("Days I slept more than six hours")
    assert params.condition == ConditionSpec(
        Aspect.VALUE, DataSourceType.HOURS_SLEPT, Comparator.GT, Quantity(6.0, "hours")
    )


def test_extract_goal_condition_unbound():
    params = params_for("Days I met my step goal")
    assert params.condition == ConditionSpec(
        Aspect.GOAL_REF, DataSourceType.STEP_COUNT, Comparator.GTE, None
    )


def test_extract_bedtime_threshold():
    params = params_for("days with bedtimes later than 5:00 AM")
    assert params.condition == ConditionSpec(
        Aspect.BEDTIME, DataSourceType.SLEEP_RANGE, Comparator.GT, TimeOfDay(300)
    )


def test_extract_condition_without_source():
    params = params_for("lower than 56")
    assert params.condition == ConditionSpec(
        Aspect.VALUE, None, Comparator.LT, Quantity(56.0, None)
    )


def test_extract_no_condition_from_bare_comparator():
    assert params_for("more than").condition is None
    assert params_for("earlier than 7:30 AM").condition is None  # bed or wake?


# -- infer_intent decision procedure ----------------------------------------

def test_pressed_start_label_takes_date():
    pressed = PressedElement(PressedKind.START_DATE_LABEL, bound_value=HOME_RANGE.start)
    outcome = interpret("January 1", home(pressed))
    assert outcome == Ok(SetStartDate(date(2020, 1, 1)))


def test_pressed_flip_start_to_end_flips_constructor_only():
    start = PressedElement(PressedKind.START_DATE_LABEL, bound_value=HOME_RANGE.start)
    end = PressedElement(PressedKind.END_DATE_LABEL, bound_value=HOME_RANGE.end)
    a = interpret("January 1", home(start))
    b = interpret("January 1", home(end))
    assert a == Ok(SetStartDate(date(2020, 1, 1)))
    assert b == Ok(SetEndDate(date(2020, 1, 1)))


def test_pressed_date_label_with_range_is_incompatible():
    pressed = PressedElement(PressedKind.START_DATE_LABEL, bound_value=HOME_RANGE.start)
    outcome = interpret("March 2020", home(pressed))
    assert isinstance(outcome, Invalid)
    assert outcome.reason is InvalidReason.INCOMPATIBLE_PARAMETER


def test_pressed_plot_with_date_is_incompatible():
    outcome = interpret("January 1", two_range(pressed=plot("a", AUG_2019)))
    assert isinstance(outcome, Invalid)
    assert outcome.reason is InvalidReason.INCOMPATIBLE_PARAMETER


def test_pressed_plot_replaces_slot():
    outcome = interpret("February 2020", two_range(pressed=plot("a", AUG_2019)))
    assert isinstance(outcome, Ok)
    assert outcome.intent.slot == "a"
    assert outcome.intent.range == month_range(2020, 2)


def test_three_ranges_ambiguous():
    outcome = interpret("compare 2017 and 2018 and 2019", home())
    assert isinstance(outcome, Invalid)
    assert outcome.reason is InvalidReason.AMBIGUOUS_SLOT


def test_condition_beats_bare_range():
    """Precedence soundness: condition + range is a query, never SetRange."""
    outcome = interpret("Days I walked more than 10,000 steps last month", home())
    assert isinstance(outcome, Ok)
    assert isinstance(outcome.intent, RunQuery)
    assert outcome.intent.range == month_range(2020, 7)


def test_query_on_comparison_page_unsupported():
    outcome = interpret("Days I walked more than 10,000 steps", two_range())
    assert isinstance(outcome, Invalid)
    assert outcome.reason is InvalidReason.UNSUPPORTED_ON_PAGE


def test_query_without_source_uses_detail_context():
    outcome = interpret("lower than 56", detail(DataSourceType.RESTING_HEART_RATE))
    assert isinstance(outcome, Ok)
    assert outcome.intent.condition.source is DataSourceType.RESTING_HEART_RATE


def test_query_without_source_on_home_unknown():
    outcome = interpret("lower than 56", home())
    assert isinstance(outcome, Invalid)
    assert outcome.reason is InvalidReason.UNKNOWN_DATA_SOURCE


def test_compare_two_uttered_ranges():
    outcome = interpret("Compare January 2018 with January 2019", home())
    assert outcome == Ok(
        CompareTwoRanges(
            DataSourceType.STEP_COUNT,
            month_range(2018, 1),
            month_range(2019, 1),
            source_defaulted=True,
        )
    )


def test_compare_one_range_pairs_with_context():
    outcome = interpret(
        "Compare with last August", detail(DataSourceType.SLEEP_RANGE, AUG_2020)
    )
    assert outcome == Ok(
        CompareTwoRanges(DataSourceType.SLEEP_RANGE, AUG_2019, AUG_2020)
    )


def test_compare_single_range_on_two_range_page_ambiguous():
    outcome = interpret("compare with February 2020", two_range())
    assert isinstance(outcome, Invalid)
    assert outcome.reason is InvalidReason.AMBIGUOUS_SLOT
    assert outcome.suggestion is not None


def test_compare_without_periods_missing():
    outcome = interpret("Compare hours slept", home())
    assert isinstance(outcome, Invalid)
    assert outcome.reason is InvalidReason.MISSING_PERIODS


def test_cyclical_with_context_source():
    outcome = interpret("Show 2020 by month", detail(DataSourceType.SLEEP_RANGE))
    assert outcome == Ok(
        CompareCyclical(
            DataSourceType.SLEEP_RANGE,
            DateRange(date(2020, 1, 1), date(2020, 12, 31)),
            CycleType.MONTH_OF_YEAR,
        )
    )


def test_cyclical_day_of_week():
    outcome = interpret(
        "show steps by day of the week this month", home()
    )
    assert isinstance(outcome, Ok)
    assert outcome.intent.cycle is CycleType.DAY_OF_WEEK
    assert outcome.intent.range == AUG_2020


def test_source_only_sets_data_source():
    outcome = interpret("Hours slept", detail(DataSourceType.STEP_COUNT))
    assert outcome == Ok(SetDataSource(DataSourceType.HOURS_SLEPT))


def test_source_plus_range_navigates():
    outcome = interpret("Step count in 2019", home())
    assert outcome == Ok(
        NavigateDetail(
            DataSourceType.STEP_COUNT, DateRange(date(2019, 1, 1), date(2019, 12, 31))
        )
    )


def test_single_range_sets_range():
    outcome = interpret("Go to March 2020", home())
    assert outcome == Ok(SetRange(month_range(2020, 3)))


def test_single_range_on_two_range_page_global_input_ambiguous():
    outcome = interpret("February 2020", two_range())
    assert isinstance(outcome, Invalid)
    assert outcome.reason is InvalidReason.AMBIGUOUS_SLOT
    assert outcome.suggestion is not None


def test_single_date_becomes_day_range():
    outcome = interpret("January 1", home())
    assert outcome == Ok(SetRange(DateRange(date(2020, 1, 1), date(2020, 1, 1))))


def test_unrecognized_passthrough():
    outcome = interpret("florb the wugs", home())
    assert outcome == Unrecognized("florb the wugs")


def test_empty_text_unrecognized():
    assert interpret("", home()) == Unrecognized("")
    assert interpret("   ", home()) == Unrecognized("   ")


def test_case_and_whitespace_invariance():
    texts = [
        "Compare January 2018 with January 2019",
        "Days I walked more than 10,000 steps last month",
        "Show 2020 by month",
        "Go to March 2020",
    ]
    for text in texts:
        squashed = " ".join(text.lower().split())
        assert interpret(text, home()) == interpret(squashed, home())


def test_interpret_equals_pipeline():
    text = "Maximum step count last month"
    ctx = home()
    expected = infer_intent(extract_parameters(normalize(text), FRAME), ctx)
    assert interpret(text, ctx) == expected


def test_totality_on_arbitrary_utf8():
    import random

    rng = random.Random(7)
    pool = "abc XYZ 0123456789 ,.:;!? 一二三 مرحبا πφ🎉\t\n"
    for _ in range(300):
        text = "".join(rng.choice(pool) for _ in range(rng.randrange(0, 60)))
        outcome = interpret(text, home())
        assert isinstance(outcome, (Ok, Invalid, Unrecognized))
