"""Aggregation, comparison, and highlight queries over a sealed dataset.

Aggregation keeps only the statistics the charts draw: day count, mean,
minimum, and maximum (plus a total for step counts). Sleep ranges
aggregate bedtime and wake time separately, on the signed-minute encoding,
so averages stay meaningful across midnight.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date
from typing import Union

from .datastore import Dataset, SleepRecord, UserProfile, get_range
from .model import (
    LB_TO_KG,
    Aspect,
    Comparator,
    ConditionSpec,
    CycleType,
    DataSourceType,
    Quantity,
    validate_condition,
)
from .timeparse import DateRange, TimeOfDay


@dataclass(frozen=True)
class AggregateStats:
    """n, mean, min, max over the days present; sum only for step counts."""

    n: int
    avg: float | None = None
    min: float | None = None
    max: float | None = None
    sum: float | None = None


@dataclass(frozen=True)
class StatTriple:
    avg: float
    earliest: int
    latest: int


@dataclass(frozen=True)
class SleepAggregate:
    n: int
    bedtime: StatTriple | None = None
    waketime: StatTriple | None = None


Stats = Union[AggregateStats, SleepAggregate]


@dataclass(frozen=True)
class HighlightResult:
    condition: ConditionSpec  # goal operand bound
    evaluated_range: DateRange
    dates: frozenset[date]

    @property
    def count(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class TwoRangeComparisonResult:
    source: DataSourceType
    range_a: DateRange
    range_b: DateRange
    stats_a: Stats
    stats_b: Stats


@dataclass(frozen=True)
class CyclicalComparisonResult:
    source: DataSourceType
    range: DateRange
    cycle: CycleType
    groups: tuple[tuple[int, Stats], ...]  # every calendar position, in order


def aggregate(dataset: Dataset, source: DataSourceType, rng: DateRange) -> Stats:
    """Statistics over the days present in *rng*; empty input gives n=0."""
    records = get_range(dataset, source, rng)
    if source is DataSourceType.SLEEP_RANGE:
        return _sleep_aggregate(records)
    return _numeric_aggregate(source, records)


def _numeric_aggregate(source: DataSourceType, records: list) -> AggregateStats:
    if not records:
        return AggregateStats(n=0)
    values = [r.value for r in records]
    total = sum(values)
    return AggregateStats(
        n=len(values),
        avg=total / len(values),
        min=min(values),
        max=max(values),
        sum=total if source is DataSourceType.STEP_COUNT else None,
    )


def _sleep_aggregate(records: list[SleepRecord]) -> SleepAggregate:
    if not records:
        return SleepAggregate(n=0)
    beds = [r.bedtime for r in records]
    wakes = [r.waketime for r in records]
    return SleepAggregate(
        n=len(records),
        bedtime=StatTriple(sum(beds) / len(beds), min(beds), max(beds)),
        waketime=StatTriple(sum(wakes) / len(wakes), min(wakes), max(wakes)),
    )


def bind_goal(cond: ConditionSpec, profile: UserProfile) -> ConditionSpec:
    """Fill a goal-reference condition's operand from the profile."""
    if cond.aspect is Aspect.GOAL_REF and cond.operand is None:
        return replace(cond, operand=Quantity(float(profile.step_goal), "steps"))
    return cond


def _compared_quantity(source: DataSourceType, aspect: Aspect, record) -> float:
    if aspect is Aspect.BEDTIME:
        return float(record.bedtime)
    if aspect is Aspect.WAKE_TIME:
        return float(record.waketime)
    return float(record.value)


def _operand_value(cond: ConditionSpec) -> float:
    operand = cond.operand
    if isinstance(operand, TimeOfDay):
        return float(operand.minutes)
    assert isinstance(operand, Quantity)
    value = operand.value
    if cond.source is DataSourceType.WEIGHT and operand.unit == "lb":
        value *= LB_TO_KG
    if cond.source is DataSourceType.HOURS_SLEPT and operand.unit == "minutes":
        value /= 60.0
    return value


_COMPARE = {
    Comparator.LT: lambda a, b: a < b,
    Comparator.LTE: lambda a, b: a <= b,
    Comparator.GT: lambda a, b: a > b,
    Comparator.GTE: lambda a, b: a >= b,
}


def run_highlight_query(
    dataset: Dataset,
    condition: ConditionSpec,
    rng: DateRange,
    profile: UserProfile,
) -> HighlightResult:
    """Days inside *rng* satisfying the condition; ties on extrema all count."""
    cond = bind_goal(condition, profile)
    if (problem := validate_condition(cond)) is not None:
        raise ValueError(problem)
    effective = (
        replace(cond, aspect=Aspect.VALUE, comparator=Comparator.GTE)
        if cond.aspect is Aspect.GOAL_REF
        else cond
    )
    records = get_range(dataset, effective.source, rng)
    if not records:
        return HighlightResult(cond, rng, frozenset())
    quantities = [
        (r.date, _compared_quantity(effective.source, effective.aspect, r))
        for r in records
    ]
    if effective.comparator in (Comparator.MIN, Comparator.MAX):
        pick = min if effective.comparator is Comparator.MIN else max
        extreme = pick(q for _, q in quantities)
        dates = frozenset(d for d, q in quantities if q == extreme)
    else:
        threshold = _operand_value(effective)
        test = _COMPARE[effective.comparator]
        dates = frozenset(d for d, q in quantities if test(q, threshold))
    return HighlightResult(cond, rng, dates)


def compare_two_ranges(
    dataset: Dataset,
    source: DataSourceType,
    range_a: DateRange,
    range_b: DateRange,
) -> TwoRangeComparisonResult:
    return TwoRangeComparisonResult(
        source=source,
        range_a=range_a,
        range_b=range_b,
        stats_a=aggregate(dataset, source, range_a),
        stats_b=aggregate(dataset, source, range_b),
    )


# Sunday-first weekday index; months are 1..12.
def _group_id(day: date, cycle: CycleType) -> int:
    if cycle is CycleType.DAY_OF_WEEK:
        return (day.weekday() + 1) % 7
    return day.month


GROUP_LABELS = {
    CycleType.DAY_OF_WEEK: ("Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"),
    CycleType.MONTH_OF_YEAR: (
        "Jan", "Feb", "Mar", "Apr", "May", "Jun",
        "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
    ),
}


def group_label(cycle: CycleType, group_id: int) -> str:
    labels = GROUP_LABELS[cycle]
    return labels[group_id if cycle is CycleType.DAY_OF_WEEK else group_id - 1]


def compare_cyclical(
    dataset: Dataset,
    source: DataSourceType,
    rng: DateRange,
    cycle: CycleType,
) -> CyclicalComparisonResult:
    """Group the range's present days by calendar position and aggregate."""
    records = get_range(dataset, source, rng)
    ids = (
        range(7) if cycle is CycleType.DAY_OF_WEEK else range(1, 13)
    )
    buckets: dict[int, list] = {i: [] for i in ids}
    for rec in records:
        buckets[_group_id(rec.date, cycle)].append(rec)
    groups = []
    for i in ids:
        if source is DataSourceType.SLEEP_RANGE:
            groups.append((i, _sleep_aggregate(buckets[i])))
        else:
            groups.append((i, _numeric_aggregate(source, buckets[i])))
    return CyclicalComparisonResult(
        source=source, range=rng, cycle=cycle, groups=tuple(groups)
    )
