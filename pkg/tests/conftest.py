from __future__ import annotations

from datetime import date

import pytest

from metricnav.datastore import (
    DailyNumericRecord,
    DatasetBuilder,
    SleepRecord,
    UserProfile,
    generate_fixture,
)
from metricnav.model import DataSourceType
from metricnav.timeparse import DateRange, ReferenceFrame

REF = date(2020, 8, 27)


@pytest.fixture(scope="session")
def frame() -> ReferenceFrame:
    return ReferenceFrame(REF)


@pytest.fixture(scope="session")
def fixture_small():
    """120-day seeded dataset; cheap enough for per-test use."""
    return generate_fixture(42, DateRange(date(2020, 5, 1), date(2020, 8, 28)))


@pytest.fixture(scope="session")
def fixture_full():
    """The full-span seeded dataset used by the oracle suites."""
    return generate_fixture(42, DateRange(date(2016, 1, 1), date(2020, 8, 27)))


def build_scenario_dataset():
    """Hand-built dataset for the walkthrough: August 2020 holds exactly
    five nights with wake time before 07:30."""
    builder = DatasetBuilder()
    early_days = {2, 7, 13, 21, 26}  # waketime 07:00 < 07:30
    sleep_2020 = [
        SleepRecord(
            date(2020, 8, d),
            bedtime=-30,
            waketime=420 if d in early_days else 480,
        )
        for d in range(1, 32)
    ]
    sleep_2019 = [
        SleepRecord(date(2019, 8, d), bedtime=-60, waketime=450)
        for d in range(1, 32)
    ]
    builder.add(DataSourceType.SLEEP_RANGE, sleep_2019 + sleep_2020)

    day = date(2020, 1, 1)
    steps = []
    while day <= date(2020, 8, 27):
        steps.append(
            DailyNumericRecord(day, 12000.0 if day.toordinal() % 2 == 0 else 8000.0)
        )
        day = date.fromordinal(day.toordinal() + 1)
    builder.add(DataSourceType.STEP_COUNT, steps)

    hours = [
        DailyNumericRecord(date(2020, 8, d), 7.5 if d % 3 else 5.5)
        for d in range(1, 28)
    ]
    builder.add(DataSourceType.HOURS_SLEPT, hours)
    return builder.build(UserProfile(step_goal=10000))


@pytest.fixture(scope="session")
def scenario_dataset():
    return build_scenario_dataset()
