"""Independent naive reference implementations for the query engine tests.

These deliberately re-derive everything with plain full scans over the raw
record tuples, sharing no code path with the engine they check.
"""

from __future__ import annotations

from datetime import date

from metricnav.datastore import Dataset
from metricnav.model import Aspect, Comparator, ConditionSpec, CycleType, DataSourceType
from metricnav.timeparse import DateRange, TimeOfDay

LB_PER_KG = 0.45359237


def scan(dataset: Dataset, source: DataSourceType, rng: DateRange) -> list:
    return [r for r in dataset.series[source] if rng.start <= r.date <= rng.end]


def naive_numeric_stats(dataset, source, rng):
    values = [r.value for r in scan(dataset, source, rng)]
    if not values:
        return {"n": 0, "avg": None, "min": None, "max": None, "sum": None}
    return {
        "n": len(values),
        "avg": sum(values) / len(values),
        "min": min(values),
        "max": max(values),
        "sum": sum(values) if source is DataSourceType.STEP_COUNT else None,
    }


def naive_sleep_stats(dataset, rng):
    records = scan(dataset, DataSourceType.SLEEP_RANGE, rng)
    if not records:
        return {"n": 0, "bedtime": None, "waketime": None}
    beds = [r.bedtime for r in records]
    wakes = [r.waketime for r in records]
    return {
        "n": len(records),
        "bedtime": (sum(beds) / len(beds), min(beds), max(beds)),
        "waketime": (sum(wakes) / len(wakes), min(wakes), max(wakes)),
    }


def _quantity(aspect: Aspect, record) -> float:
    if aspect is Aspect.BEDTIME:
        return float(record.bedtime)
    if aspect is Aspect.WAKE_TIME:
        return float(record.waketime)
    return float(record.value)


def naive_highlight(
    dataset: Dataset, cond: ConditionSpec, rng: DateRange, step_goal: int
) -> set[date]:
    aspect = cond.aspect
    comparator = cond.comparator
    if aspect is Aspect.GOAL_REF:
        aspect, comparator = Aspect.VALUE, Comparator.GTE
        threshold = float(step_goal)
    elif isinstance(cond.operand, TimeOfDay):
        threshold = float(cond.operand.minutes)
    elif cond.operand is not None:
        threshold = cond.operand.value
        if cond.source is DataSourceType.WEIGHT and cond.operand.unit == "lb":
            threshold *= LB_PER_KG
        if cond.source is DataSourceType.HOURS_SLEPT and cond.operand.unit == "minutes":
            threshold /= 60.0
    else:
        threshold = None

    records = scan(dataset, cond.source, rng)
    if not records:
        return set()
    pairs = [(r.date, _quantity(aspect, r)) for r in records]
    if comparator is Comparator.MIN:
        low = min(q for _, q in pairs)
        return {d for d, q in pairs if q == low}
    if comparator is Comparator.MAX:
        high = max(q for _, q in pairs)
        return {d for d, q in pairs if q == high}
    ops = {
        Comparator.LT: lambda a, b: a < b,
        Comparator.LTE: lambda a, b: a <= b,
        Comparator.GT: lambda a, b: a > b,
        Comparator.GTE: lambda a, b: a >= b,
    }
    return {d for d, q in pairs if ops[comparator](q, threshold)}


def naive_cyclical(dataset, source, rng, cycle: CycleType):
    """Group ids mapped to naive per-group stats dicts."""
    records = scan(dataset, source, rng)
    ids = range(7) if cycle is CycleType.DAY_OF_WEEK else range(1, 13)
    groups = {}
    for gid in ids:
        members = [
            r
            for r in records
            if (
                (r.date.weekday() + 1) % 7 == gid
                if cycle is CycleType.DAY_OF_WEEK
                else r.date.month == gid
            )
        ]
        if source is DataSourceType.SLEEP_RANGE:
            beds = [r.bedtime for r in members]
            wakes = [r.waketime for r in members]
            groups[gid] = (
                {"n": 0, "bedtime": None, "waketime": None}
                if not members
                else {
                    "n": len(members),
                    "bedtime": (sum(beds) / len(beds), min(beds), max(beds)),
                    "waketime": (sum(wakes) / len(wakes), min(wakes), max(wakes)),
                }
            )
        else:
            values = [r.value for r in members]
            groups[gid] = (
                {"n": 0, "avg": None, "min": None, "max": None, "sum": None}
                if not values
                else {
                    "n": len(values),
                    "avg": sum(values) / len(values),
                    "min": min(values),
                    "max": max(values),
                    "sum": sum(values) if source is DataSourceType.STEP_COUNT else None,
                }
            )
    return groups
