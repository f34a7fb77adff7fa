"""Ingest, validate, and serve the five daily metric series plus the profile.

Storage is an in-memory dataset built once from CSV streams (or from the
seeded generator) and then sealed; readers get sorted, immutable record
tuples. Missing days are first-class: they are simply absent, never
zero-filled.
"""

from __future__ import annotations

import bisect
import csv
import random
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import IO, Iterable, Mapping, Union

from .model import DataSourceType
from .timeparse import DateRange


class RowError(ValueError):
    """A malformed CSV row: carries the 1-based line number and reason."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class ValidationError(ValueError):
    """A record that violates a series invariant."""


@dataclass(frozen=True, order=True)
class DailyNumericRecord:
    date: date
    value: float


@dataclass(frozen=True, order=True)
class SleepRecord:
    """Main sleep attributed to a wake day.

    ``bedtime`` is signed minutes relative to that day's midnight (negative
    means the previous evening); ``waketime`` is minutes into the day.
    """

    date: date
    bedtime: int
    waketime: int


Record = Union[DailyNumericRecord, SleepRecord]

NUMERIC_SOURCES = (
    DataSourceType.STEP_COUNT,
    DataSourceType.RESTING_HEART_RATE,
    DataSourceType.HOURS_SLEPT,
    DataSourceType.WEIGHT,
)

CSV_NAMES = {
    DataSourceType.STEP_COUNT: "steps.csv",
    DataSourceType.RESTING_HEART_RATE: "rhr.csv",
    DataSourceType.SLEEP_RANGE: "sleep.csv",
    DataSourceType.HOURS_SLEPT: "hours_slept.csv",
    DataSourceType.WEIGHT: "weight.csv",
}


def check_record(source: DataSourceType, record: Record) -> str | None:
    """Invariant check; returns the violation description or None."""
    if source is DataSourceType.SLEEP_RANGE:
        if not -720 <= record.bedtime < 720:
            return f"bedtime {record.bedtime} outside [-720, 720)"
        if not 0 <= record.waketime < 1440:
            return f"waketime {record.waketime} outside [0, 1440)"
        if record.bedtime >= record.waketime:
            return f"bedtime {record.bedtime} not before waketime {record.waketime}"
        return None
    v = record.value
    if source is DataSourceType.STEP_COUNT and (v < 0 or v != int(v)):
        return f"step count {v} must be a non-negative integer"
    if source is DataSourceType.RESTING_HEART_RATE and not 20 < v < 250:
        return f"resting heart rate {v} outside (20, 250)"
    if source is DataSourceType.HOURS_SLEPT and not 0 <= v <= 24:
        return f"hours slept {v} outside [0, 24]"
    if source is DataSourceType.WEIGHT and v <= 0:
        return f"weight {v} must be positive"
    return None


@dataclass(frozen=True)
class UserProfile:
    step_goal: int
    weight_unit_display: str = "kg"  # kg | lb

    def __post_init__(self) -> None:
        if self.step_goal <= 0:
            raise ValidationError("step_goal must be positive")
        if self.weight_unit_display not in ("kg", "lb"):
            raise ValidationError("weight unit must be kg or lb")


@dataclass(frozen=True)
class Dataset:
    """Sealed, immutable collection of the five series plus the profile."""

    series: Mapping[DataSourceType, tuple[Record, ...]]
    profile: UserProfile
    coverage: Mapping[DataSourceType, DateRange | None]

    def records(self, source: DataSourceType) -> tuple[Record, ...]:
        return self.series[source]


def get_range(dataset: Dataset, source: DataSourceType, rng: DateRange) -> list[Record]:
    """Records with date inside *rng*, ascending; missing days stay absent."""
    recs = dataset.series[source]
    lo = bisect.bisect_left(recs, rng.start, key=lambda r: r.date)
    hi = bisect.bisect_right(recs, rng.end, key=lambda r: r.date)
    return list(recs[lo:hi])


class DatasetBuilder:
    """Single-writer accumulation of records; ``build`` seals the dataset."""

    def __init__(self) -> None:
        self._by_source: dict[DataSourceType, dict[date, Record]] = {
            s: {} for s in DataSourceType
        }
        self.duplicate_counts: dict[DataSourceType, int] = {s: 0 for s in DataSourceType}
        self.profile: UserProfile | None = None

    def add(self, source: DataSourceType, records: Iterable[Record]) -> int:
        """Merge records; a repeated date overwrites (last wins) and is counted."""
        count = 0
        table = self._by_source[source]
        for rec in records:
            if (problem := check_record(source, rec)) is not None:
                raise ValidationError(f"{source.value}: {problem}")
            if rec.date in table:
                self.duplicate_counts[source] += 1
            table[rec.date] = rec
            count += 1
        return count

    def ingest(self, stream: IO[str], source: DataSourceType) -> int:
        """Parse one CSV stream into this builder; returns records loaded."""
        if source is DataSourceType.SLEEP_RANGE:
            return self.add(source, read_sleep_csv(stream))
        return self.add(source, read_numeric_csv(stream))

    def build(self, profile: UserProfile | None = None) -> Dataset:
        profile = profile or self.profile or UserProfile(step_goal=10000)
        series = {}
        coverage = {}
        for source, table in self._by_source.items():
            recs = tuple(table[d] for d in sorted(table))
            series[source] = recs
            coverage[source] = (
                DateRange(recs[0].date, recs[-1].date) if recs else None
            )
        return Dataset(series=series, profile=profile, coverage=coverage)


def _parse_date(text: str, line: int) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError as exc:
        raise RowError(line, f"bad date {text!r}") from exc


def _parse_local_dt(text: str, line: int) -> datetime:
    try:
        return datetime.fromisoformat(text.strip())
    except ValueError as exc:
        raise RowError(line, f"bad datetime {text!r}") from exc


def read_numeric_csv(stream: IO[str]) -> list[DailyNumericRecord]:
    """Rows of "date,value" with a required header."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["date", "value"]:
        raise RowError(1, "expected header 'date,value'")
    out = []
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise RowError(line, f"expected 2 fields, got {len(row)}")
        day = _parse_date(row[0], line)
        try:
            value = float(row[1])
        except ValueError as exc:
            raise RowError(line, f"bad value {row[1]!r}") from exc
        out.append(DailyNumericRecord(day, value))
    return out


def read_sleep_csv(stream: IO[str]) -> list[SleepRecord]:
    """Rows of "date,bedtime,waketime" with local datetimes; date is the wake day."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != [
        "date", "bedtime", "waketime",
    ]:
        raise RowError(1, "expected header 'date,bedtime,waketime'")
    out = []
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise RowError(line, f"expected 3 fields, got {len(row)}")
        day = _parse_date(row[0], line)
        midnight = datetime(day.year, day.month, day.day)
        bed = _parse_local_dt(row[1], line)
        wake = _parse_local_dt(row[2], line)
        out.append(
            SleepRecord(
                date=day,
                bedtime=round((bed - midnight).total_seconds() / 60),
                waketime=round((wake - midnight).total_seconds() / 60),
            )
        )
    return out


def read_profile_csv(stream: IO[str]) -> UserProfile:
    """Rows of "key,value"; step_goal is required."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["key", "value"]:
        raise RowError(1, "expected header 'key,value'")
    fields: dict[str, str] = {}
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise RowError(line, f"expected 2 fields, got {len(row)}")
        fields[row[0].strip()] = row[1].strip()
    if "step_goal" not in fields:
        raise RowError(1, "missing required key 'step_goal'")
    try:
        goal = int(fields["step_goal"])
    except ValueError as exc:
        raise RowError(1, f"bad step_goal {fields['step_goal']!r}") from exc
    return UserProfile(
        step_goal=goal,
        weight_unit_display=fields.get("weight_unit_display", "kg"),
    )


def load_dataset(data_dir: str | Path) -> Dataset:
    """Read the six CSVs from a directory; missing series files are empty."""
    data_dir = Path(data_dir)
    builder = DatasetBuilder()
    for source, name in CSV_NAMES.items():
        path = data_dir / name
        if not path.exists():
            continue
        with path.open(encoding="utf-8", newline="") as fh:
            builder.ingest(fh, source)
    profile = None
    profile_path = data_dir / "profile.csv"
    if profile_path.exists():
        with profile_path.open(encoding="utf-8", newline="") as fh:
            profile = read_profile_csv(fh)
    return builder.build(profile)


# ---------------------------------------------------------------------------
# deterministic synthetic fixture


@dataclass(frozen=True)
class GeneratorConfig:
    """Distribution constants for the synthetic fixture (not ground truth)."""

    steps_mean: float = 9000.0
    steps_sd: float = 3000.0
    steps_max: int = 40000
    rhr_mean: float = 62.0
    rhr_sd: float = 4.0
    rhr_lo: int = 45
    rhr_hi: int = 100
    sleep_minutes_mean: float = 450.0  # 7.5 h
    sleep_minutes_sd: float = 60.0
    bedtime_mean: float = -30.0
    bedtime_sd: float = 60.0
    weight_start: float = 70.0
    weight_step_sd: float = 0.12
    weight_lo: float = 50.0
    weight_hi: float = 90.0
    missing_rate: float = 0.05


def generate_fixture(
    seed: int, span: DateRange, config: GeneratorConfig = GeneratorConfig()
) -> Dataset:
    """Seeded pseudo-random daily data for all five sources over *span*.

    Identical (seed, span, config) always produce an identical dataset.
    Hours-slept values mirror the generated sleep episode's duration so the
    two series tell one story, though each has its own missing days.
    """
    rng = random.Random(seed)
    cfg = config
    builder = DatasetBuilder()
    steps, rhr, sleeps, hours, weights = [], [], [], [], []
    weight = cfg.weight_start
    day = span.start
    while day <= span.end:
        miss_steps = rng.random() < cfg.missing_rate
        step_val = int(min(max(rng.gauss(cfg.steps_mean, cfg.steps_sd), 0), cfg.steps_max))
        miss_rhr = rng.random() < cfg.missing_rate
        rhr_val = int(min(max(rng.gauss(cfg.rhr_mean, cfg.rhr_sd), cfg.rhr_lo), cfg.rhr_hi))
        miss_sleep = rng.random() < cfg.missing_rate
        miss_hours = rng.random() < cfg.missing_rate
        bed = int(min(max(rng.gauss(cfg.bedtime_mean, cfg.bedtime_sd), -300), 360))
        duration = int(min(max(rng.gauss(cfg.sleep_minutes_mean, cfg.sleep_minutes_sd),
                                max(120, -bed + 60)), 720))
        miss_weight = rng.random() < cfg.missing_rate
        weight += rng.gauss(0.0, cfg.weight_step_sd)
        weight = min(max(weight, cfg.weight_lo), cfg.weight_hi)

        if not miss_steps:
            steps.append(DailyNumericRecord(day, float(step_val)))
        if not miss_rhr:
            rhr.append(DailyNumericRecord(day, float(rhr_val)))
        if not miss_sleep:
            sleeps.append(SleepRecord(day, bed, bed + duration))
        if not miss_hours:
            hours.append(DailyNumericRecord(day, round(duration / 60, 1)))
        if not miss_weight:
            weights.append(DailyNumericRecord(day, round(weight, 1)))
        day += timedelta(days=1)

    builder.add(DataSourceType.STEP_COUNT, steps)
    builder.add(DataSourceType.RESTING_HEART_RATE, rhr)
    builder.add(DataSourceType.SLEEP_RANGE, sleeps)
    builder.add(DataSourceType.HOURS_SLEPT, hours)
    builder.add(DataSourceType.WEIGHT, weights)
    return builder.build(UserProfile(step_goal=10000))


def _fmt_value(source: DataSourceType, value: float) -> str:
    if source in (DataSourceType.STEP_COUNT, DataSourceType.RESTING_HEART_RATE):
        return str(int(value))
    return f"{value:.1f}"


def _minutes_to_dt(day: date, minutes: int) -> datetime:
    return datetime(day.year, day.month, day.day) + timedelta(minutes=minutes)


def write_csvs(dataset: Dataset, out_dir: str | Path) -> list[Path]:
    """Emit the five series CSVs plus profile.csv; deterministic output."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for source, name in CSV_NAMES.items():
        path = out_dir / name
        with path.open("w", encoding="utf-8", newline="") as fh:
            if source is DataSourceType.SLEEP_RANGE:
                fh.write("date,bedtime,waketime\n")
                for rec in dataset.series[source]:
                    bed = _minutes_to_dt(rec.date, rec.bedtime)
                    wake = _minutes_to_dt(rec.date, rec.waketime)
                    fh.write(
                        f"{rec.date.isoformat()},"
                        f"{bed.strftime('%Y-%m-%dT%H:%M')},"
                        f"{wake.strftime('%Y-%m-%dT%H:%M')}\n"
                    )
            else:
                fh.write("date,value\n")
                for rec in dataset.series[source]:
                    fh.write(f"{rec.date.isoformat()},{_fmt_value(source, rec.value)}\n")
        written.append(path)
    profile_path = out_dir / "profile.csv"
    with profile_path.open("w", encoding="utf-8", newline="") as fh:
        fh.write("key,value\n")
        fh.write(f"step_goal,{dataset.profile.step_goal}\n")
        fh.write(f"weight_unit_display,{dataset.profile.weight_unit_display}\n")
    written.append(profile_path)
    return written
