from __future__ import annotations

import io
from datetime import date

import pytest

from metricnav.datastore import (
    DailyNumericRecord,
    DatasetBuilder,
    RowError,
    SleepRecord,
    UserProfile,
    ValidationError,
    generate_fixture,
    get_range,
    load_dataset,
    read_numeric_csv,
    read_profile_csv,
    read_sleep_csv,
    write_csvs,
)
from metricnav.model import DataSourceType
from metricnav.timeparse import DateRange

SPAN = DateRange(date(2020, 6, 1), date(2020, 8, 27))


def test_numeric_row_maps_directly():
    records = read_numeric_csv(io.StringIO("date,value\n2020-08-27,10760\n"))
    assert records == [DailyNumericRecord(date(2020, 8, 27), 10760.0)]


def test_sleep_row_same_day_bedtime():
    records = read_sleep_csv(
        io.StringIO("date,bedtime,waketime\n2020-08-27,2020-08-27T01:45,2020-08-27T09:30\n")
    )
    assert records == [SleepRecord(date(2020, 8, 27), 105, 570)]


def test_sleep_row_previous_evening_bedtime():
    records = read_sleep_csv(
        io.StringIO("date,bedtime,waketime\n2020-08-27,2020-08-26T23:30,2020-08-27T07:00\n")
    )
    assert records == [SleepRecord(date(2020, 8, 27), -30, 420)]


def test_sleep_encoding_round_trip():
    """Offsets back to instants reproduce the CSV to the minute."""
    from metricnav.datastore import _minutes_to_dt

    rec = SleepRecord(date(2020, 8, 27), -30, 420)
    assert _minutes_to_dt(rec.date, rec.bedtime).isoformat() == "2020-08-26T23:30:00"
    assert _minutes_to_dt(rec.date, rec.waketime).isoformat() == "2020-08-27T07:00:00"


def test_bad_header_is_row_error():
    with pytest.raises(RowError):
        read_numeric_csv(io.StringIO("day,steps\n2020-08-27,10760\n"))


def test_bad_value_reports_line():
    with pytest.raises(RowError) as err:
        read_numeric_csv(io.StringIO("date,value\n2020-08-27,many\n"))
    assert err.value.line == 2


def test_invariant_violation_rejected():
    builder = DatasetBuilder()
    with pytest.raises(ValidationError):
        builder.add(
            DataSourceType.RESTING_HEART_RATE,
            [DailyNumericRecord(date(2020, 1, 1), 10.0)],
        )
    with pytest.raises(ValidationError):
        builder.add(
            DataSourceType.SLEEP_RANGE,
            [SleepRecord(date(2020, 1, 1), 400, 300)],
        )


def test_duplicate_dates_last_wins_with_count():
    builder = DatasetBuilder()
    builder.ingest(
        io.StringIO("date,value\n2020-08-27,100\n2020-08-27,200\n"),
        DataSourceType.STEP_COUNT,
    )
    dataset = builder.build()
    assert builder.duplicate_counts[DataSourceType.STEP_COUNT] == 1
    assert dataset.series[DataSourceType.STEP_COUNT][0].value == 200.0


def test_ingest_idempotence():
    text = "date,value\n2020-08-25,100\n2020-08-26,200\n"
    once = DatasetBuilder()
    once.ingest(io.StringIO(text), DataSourceType.STEP_COUNT)
    twice = DatasetBuilder()
    twice.ingest(io.StringIO(text), DataSourceType.STEP_COUNT)
    twice.ingest(io.StringIO(text), DataSourceType.STEP_COUNT)
    assert once.build().series == twice.build().series


def test_profile_requires_step_goal():
    profile = read_profile_csv(io.StringIO("key,value\nstep_goal,10000\n"))
    assert profile == UserProfile(step_goal=10000)
    with pytest.raises(RowError):
        read_profile_csv(io.StringIO("key,value\nweight_unit_display,kg\n"))


def test_get_range_variants(fixture_small):
    empty = get_range(
        fixture_small,
        DataSourceType.STEP_COUNT,
        DateRange(date(2010, 1, 1), date(2010, 1, 7)),
    )
    assert empty == []
    series = fixture_small.series[DataSourceType.STEP_COUNT]
    one_day = DateRange(series[0].date, series[0].date)
    assert get_range(fixture_small, DataSourceType.STEP_COUNT, one_day) == [series[0]]


def test_get_range_week_with_missing_day():
    builder = DatasetBuilder()
    days = [1, 2, 3, 5, 6, 7, 8]  # the 4th is missing
    builder.add(
        DataSourceType.STEP_COUNT,
        [DailyNumericRecord(date(2020, 8, d), 1000.0) for d in days],
    )
    dataset = builder.build()
    week = DateRange(date(2020, 8, 1), date(2020, 8, 7))
    records = get_range(dataset, DataSourceType.STEP_COUNT, week)
    assert len(records) == 6
    dates = [r.date for r in records]
    assert dates == sorted(dates)


def test_generator_deterministic():
    a = generate_fixture(42, SPAN)
    b = generate_fixture(42, SPAN)
    assert a.series == b.series
    assert a.coverage == b.coverage


def test_generator_seed_sensitivity():
    a = generate_fixture(42, SPAN)
    b = generate_fixture(43, SPAN)
    assert a.series[DataSourceType.STEP_COUNT] != b.series[DataSourceType.STEP_COUNT]


def test_generator_records_satisfy_invariants():
    from metricnav.datastore import check_record

    dataset = generate_fixture(7, SPAN)
    for source in DataSourceType:
        for rec in dataset.series[source]:
            assert check_record(source, rec) is None
        coverage = dataset.coverage[source]
        recs = dataset.series[source]
        assert coverage == DateRange(recs[0].date, recs[-1].date)


def test_generator_has_missing_days():
    dataset = generate_fixture(42, DateRange(date(2016, 1, 1), date(2017, 12, 31)))
    total_days = (date(2017, 12, 31) - date(2016, 1, 1)).days + 1
    for source in DataSourceType:
        n = len(dataset.series[source])
        assert 0.85 * total_days < n < total_days  # ~5% missing


def test_csv_round_trip(tmp_path):
    dataset = generate_fixture(42, SPAN)
    write_csvs(dataset, tmp_path)
    reloaded = load_dataset(tmp_path)
    assert reloaded.series == dataset.series
    assert reloaded.profile == dataset.profile


def test_write_csvs_byte_identical(tmp_path):
    dataset = generate_fixture(42, SPAN)
    dir_a, dir_b = tmp_path / "a", tmp_path / "b"
    write_csvs(dataset, dir_a)
    write_csvs(generate_fixture(42, SPAN), dir_b)
    for path_a in sorted(dir_a.iterdir()):
        assert path_a.read_bytes() == (dir_b / path_a.name).read_bytes()
