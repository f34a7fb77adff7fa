"""Resolve natural-language temporal expressions against a reference date.

All resolution is anchored to an explicit :class:`ReferenceFrame` rather
than the wall clock, so identical inputs always produce identical output.
Conventions baked into the frame:

* weeks run Sunday through Saturday;
* seasons follow the Northern-Hemisphere meteorological scheme, with
  winter attributed to the year that contains its January-February part;
* "this X" is the most recent occurrence of X starting on or before the
  reference date, "last X" is the most recent occurrence that *ended*
  strictly before it ("last August" in late August 2020 is August 2019);
* "last N days" is the inclusive N-day window ending at the reference.
"""

from __future__ import annotations

import calendar
import csv
import re
from dataclasses import dataclass, field
from datetime import date, timedelta
from enum import Enum
from importlib import resources
from typing import Mapping, Union

from .tokens import Token, tokenize

MONDAY, TUESDAY, WEDNESDAY, THURSDAY, FRIDAY, SATURDAY, SUNDAY = range(7)

_MONTHS = {
    "january": 1, "jan": 1,
    "february": 2, "feb": 2,
    "march": 3, "mar": 3,
    "april": 4, "apr": 4,
    "may": 5,
    "june": 6, "jun": 6,
    "july": 7, "jul": 7,
    "august": 8, "aug": 8,
    "september": 9, "sep": 9, "sept": 9,
    "october": 10, "oct": 10,
    "november": 11, "nov": 11,
    "december": 12, "dec": 12,
}

# (start month/day, end month/day); winter wraps the year boundary and is
# named for the year holding its January-February part.
_SEASONS = {
    "spring": ((3, 1), (5, 31)),
    "summer": ((6, 1), (8, 31)),
    "fall": ((9, 1), (11, 30)),
    "autumn": ((9, 1), (11, 30)),
    "winter": ((12, 1), (2, None)),
}

_WINDOW_UNITS = {
    "day": "day", "days": "day",
    "week": "week", "weeks": "week",
    "month": "month", "months": "month",
    "year": "year", "years": "year",
}

# A 4-digit number reads as a year only when it is not a measurement
# ("2000 steps") and was not written with digit grouping ("2,000").
_MEASURE_WORDS = {
    "step", "steps", "hour", "hours", "minute", "minutes", "bpm",
    "kg", "kilogram", "kilograms", "kilos", "lb", "lbs", "pound", "pounds",
    "day", "days", "week", "weeks", "month", "months", "year", "years",
}

_YEAR_MIN, _YEAR_MAX = 1900, 2100

_RANGE_CONNECTORS = {"to", "through", "until", "till"}


class HolidayUnknown(LookupError):
    """Raised for a holiday name missing from the table or an uncovered year."""


@dataclass(frozen=True)
class FixedDateRule:
    month: int
    day: int


@dataclass(frozen=True)
class NthWeekdayRule:
    month: int
    weekday: int  # Monday=0 .. Sunday=6
    n: int


@dataclass(frozen=True)
class LookupRule:
    dates: Mapping[int, date]  # year -> observed date


HolidayRule = Union[FixedDateRule, NthWeekdayRule, LookupRule]


@dataclass(frozen=True)
class DateRange:
    """Inclusive span of calendar days."""

    start: date
    end: date

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"range start {self.start} after end {self.end}")

    def __contains__(self, day: date) -> bool:
        return self.start <= day <= self.end

    @property
    def days(self) -> int:
        return (self.end - self.start).days + 1

    def iso(self) -> str:
        return f"{self.start.isoformat()} to {self.end.isoformat()}"


@dataclass(frozen=True)
class TimeOfDay:
    """Clock time expressed as minutes since midnight."""

    minutes: int

    def __post_init__(self) -> None:
        if not 0 <= self.minutes <= 1439:
            raise ValueError(f"minutes {self.minutes} outside 0..1439")

    def fmt(self) -> str:
        return f"{self.minutes // 60:02d}:{self.minutes % 60:02d}"


class EntityKind(Enum):
    DATE = "date"
    RANGE = "range"
    CLOCK = "clock"


@dataclass(frozen=True)
class TimeEntity:
    kind: EntityKind
    value: date | DateRange | TimeOfDay
    span: tuple[int, int]  # character interval in the source text


def _load_lookup_holidays() -> dict[str, LookupRule]:
    """Read the packaged date table for holidays with no closed-form rule.

    The file holds "name,year,iso-date" records sorted by name then year.
    """
    tables: dict[str, dict[int, date]] = {}
    path = resources.files("metricnav").joinpath("data/holidays.csv")
    with path.open("r", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            name, year, iso = row[0].strip().lower(), int(row[1]), row[2].strip()
            tables.setdefault(name, {})[year] = date.fromisoformat(iso)
    return {name: LookupRule(dates) for name, dates in tables.items()}


def default_holiday_table() -> dict[str, HolidayRule]:
    table: dict[str, HolidayRule] = {
        "new year's day": FixedDateRule(1, 1),
        "new years day": FixedDateRule(1, 1),
        "new year": FixedDateRule(1, 1),
        "valentine's day": FixedDateRule(2, 14),
        "independence day": FixedDateRule(7, 4),
        "halloween": FixedDateRule(10, 31),
        "christmas day": FixedDateRule(12, 25),
        "christmas": FixedDateRule(12, 25),
        "thanksgiving day": NthWeekdayRule(11, THURSDAY, 4),
        "thanksgiving": NthWeekdayRule(11, THURSDAY, 4),
    }
    for name, rule in _load_lookup_holidays().items():
        table[name] = rule
        if not name.endswith("day"):
            table[name + "'s day"] = rule
    return table


def load_holiday_table(path) -> dict[str, HolidayRule]:
    """Load an external lookup-only holiday table (name,year,date CSV)."""
    tables: dict[str, dict[int, date]] = {}
    with open(path, encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            name, year, iso = row[0].strip().lower(), int(row[1]), row[2].strip()
            tables.setdefault(name, {})[year] = date.fromisoformat(iso)
    return {name: LookupRule(dates) for name, dates in tables.items()}


@dataclass(frozen=True)
class ReferenceFrame:
    """Anchor configuration for resolving relative time expressions."""

    reference_date: date
    week_start: int = SUNDAY
    season_scheme: str = "meteorological"
    holiday_table: Mapping[str, HolidayRule] = field(
        default_factory=default_holiday_table
    )

    def __post_init__(self) -> None:
        if self.season_scheme != "meteorological":
            raise ValueError("only the meteorological season scheme is supported")


# ---------------------------------------------------------------------------
# calendar helpers


def month_range(year: int, month: int) -> DateRange:
    last = calendar.monthrange(year, month)[1]
    return DateRange(date(year, month, 1), date(year, month, last))


def year_range(year: int) -> DateRange:
    return DateRange(date(year, 1, 1), date(year, 12, 31))


def week_range(day: date, week_start: int = SUNDAY) -> DateRange:
    offset = (day.weekday() - week_start) % 7
    start = day - timedelta(days=offset)
    return DateRange(start, start + timedelta(days=6))


def shift_months(day: date, months: int) -> date:
    """Move by whole months, clamping the day-of-month to what exists."""
    index = day.year * 12 + (day.month - 1) + months
    year, month = divmod(index, 12)
    month += 1
    last = calendar.monthrange(year, month)[1]
    return date(year, month, min(day.day, last))


def resolve_season(name: str, year: int) -> DateRange:
    """Meteorological season range; winter of Y runs Dec 1 (Y-1) to end of Feb Y."""
    key = name.lower()
    if key not in _SEASONS:
        raise ValueError(f"unknown season {name!r}")
    (sm, sd), (em, ed) = _SEASONS[key]
    if key == "winter":
        feb_last = calendar.monthrange(year, 2)[1]
        return DateRange(date(year - 1, 12, 1), date(year, 2, feb_last))
    return DateRange(date(year, sm, sd), date(year, em, ed))


def resolve_holiday(name: str, year: int, frame: ReferenceFrame) -> date:
    rule = frame.holiday_table.get(name.lower())
    if rule is None:
        raise HolidayUnknown(f"no holiday named {name!r}")
    if isinstance(rule, FixedDateRule):
        return date(year, rule.month, rule.day)
    if isinstance(rule, NthWeekdayRule):
        first = date(year, rule.month, 1)
        offset = (rule.weekday - first.weekday()) % 7
        day = first + timedelta(days=offset, weeks=rule.n - 1)
        if day.month != rule.month:
            raise HolidayUnknown(
                f"{name!r} has no {rule.n}th weekday in {year}-{rule.month:02d}"
            )
        return day
    resolved = rule.dates.get(year)
    if resolved is None:
        raise HolidayUnknown(f"{name!r} not tabulated for {year}")
    return resolved


# ---------------------------------------------------------------------------
# anchored resolution ("this" / "last" / year-less forms)


def _this_month(month: int, ref: date) -> DateRange:
    year = ref.year if date(ref.year, month, 1) <= ref else ref.year - 1
    return month_range(year, month)


def _last_month_of(month: int, ref: date) -> DateRange:
    year = ref.year
    while month_range(year, month).end >= ref:
        year -= 1
    return month_range(year, month)


def _this_season(name: str, ref: date) -> DateRange:
    for year in (ref.year + 1, ref.year, ref.year - 1):
        rng = resolve_season(name, year)
        if rng.start <= ref:
            return rng
    raise AssertionError("unreachable")


def _last_season(name: str, ref: date) -> DateRange:
    for year in (ref.year + 1, ref.year, ref.year - 1, ref.year - 2):
        rng = resolve_season(name, year)
        if rng.end < ref:
            return rng
    raise AssertionError("unreachable")


def _this_holiday(name: str, ref: date, frame: ReferenceFrame) -> date:
    for year in (ref.year, ref.year - 1):
        try:
            day = resolve_holiday(name, year, frame)
        except HolidayUnknown:
            continue
        if day <= ref:
            return day
    raise HolidayUnknown(f"{name!r} unresolvable near {ref}")


def _last_holiday(name: str, ref: date, frame: ReferenceFrame) -> date:
    for year in (ref.year, ref.year - 1):
        try:
            day = resolve_holiday(name, year, frame)
        except HolidayUnknown:
            continue
        if day < ref:
            return day
    raise HolidayUnknown(f"{name!r} unresolvable near {ref}")


def _this_date(month: int, day: int, ref: date) -> date:
    candidate = date(ref.year, month, min(day, calendar.monthrange(ref.year, month)[1]))
    if candidate <= ref:
        return candidate
    year = ref.year - 1
    return date(year, month, min(day, calendar.monthrange(year, month)[1]))


def _window(unit: str, n: int, ref: date) -> DateRange:
    """Inclusive window of n units ending at the reference date."""
    if unit == "day":
        return DateRange(ref - timedelta(days=n - 1), ref)
    if unit == "week":
        return DateRange(ref - timedelta(days=7 * n - 1), ref)
    if unit == "month":
        return DateRange(shift_months(ref, -n) + timedelta(days=1), ref)
    return DateRange(ref.replace(year=ref.year - n) + timedelta(days=1), ref)


def _calendar_unit(unit: str, which: str, ref: date, week_start: int) -> DateRange:
    """Current or previous whole calendar unit ("this month", "last year")."""
    if unit == "day":
        day = ref if which == "this" else ref - timedelta(days=1)
        return DateRange(day, day)
    if unit == "week":
        current = week_range(ref, week_start)
        if which == "this":
            return current
        return DateRange(
            current.start - timedelta(days=7), current.end - timedelta(days=7)
        )
    if unit == "month":
        current = month_range(ref.year, ref.month)
        if which == "this":
            return current
        prev = shift_months(date(ref.year, ref.month, 1), -1)
        return month_range(prev.year, prev.month)
    current = year_range(ref.year)
    return current if which == "this" else year_range(ref.year - 1)


# ---------------------------------------------------------------------------
# token-stream matching


class _Matcher:
    def __init__(self, text: str, tokens: list[Token], frame: ReferenceFrame):
        self.text = text
        self.tokens = tokens
        self.frame = frame
        self.ref = frame.reference_date
        self.holiday_phrases = sorted(
            (name.split() for name in frame.holiday_table),
            key=len,
            reverse=True,
        )

    # -- helpers

    def tok(self, i: int) -> Token | None:
        return self.tokens[i] if 0 <= i < len(self.tokens) else None

    def span(self, i: int, j: int) -> tuple[int, int]:
        return (self.tokens[i].start, self.tokens[j - 1].end)

    def _entity(self, kind: EntityKind, value, i: int, j: int) -> tuple[TimeEntity, int]:
        return TimeEntity(kind, value, self.span(i, j)), j

    def _is_year(self, tok: Token | None) -> bool:
        if tok is None or tok.num is None or tok.grouped or tok.clock is not None:
            return False
        n = tok.num
        return n == int(n) and _YEAR_MIN <= n <= _YEAR_MAX

    def _year_allowed(self, i: int) -> bool:
        nxt = self.tok(i + 1)
        return nxt is None or nxt.norm not in _MEASURE_WORDS

    def _month_at(self, i: int) -> int | None:
        tok = self.tok(i)
        if tok is None or tok.norm not in _MONTHS:
            return None
        if tok.norm == "may":
            # "May" doubles as a common verb: accept it as a month only when
            # capitalized or sitting next to a day/year number.
            prev, nxt = self.tok(i - 1), self.tok(i + 1)
            adjacent_num = (nxt is not None and nxt.num is not None) or (
                prev is not None and prev.num is not None
            )
            if not (tok.text[:1].isupper() or adjacent_num):
                return None
        return _MONTHS[tok.norm]

    # -- top-level scan

    def parse(self) -> list[TimeEntity]:
        out: list[TimeEntity] = []
        i = 0
        while i < len(self.tokens):
            hit = self.match_at(i)
            if hit is None:
                i += 1
                continue
            entity, j = hit
            out.append(entity)
            i = j
        return out

    def match_at(self, i: int) -> tuple[TimeEntity, int] | None:
        tok = self.tok(i)
        if tok is None:
            return None
        if tok.norm == "since":
            hit = self.match_at(i + 1)
            if hit is not None:
                inner, j = hit
                start = _entity_start(inner)
                if start is not None and start <= self.ref:
                    rng = DateRange(start, self.ref)
                    return TimeEntity(EntityKind.RANGE, rng, self.span(i, j)), j
            return None
        if tok.norm in ("from", "between"):
            closer = "and" if tok.norm == "between" else None
            return self._match_joined(i + 1, i, closer)
        return self._match_joined(i, i, None)

    def _match_joined(
        self, i: int, span_from: int, closer: str | None
    ) -> tuple[TimeEntity, int] | None:
        """Match "A to B" pairs into one range; otherwise the bare match.

        With a "from"/"between" prefix only the joined form counts: a bare
        "from X" leaves the prefix word as noise and X is matched on a
        later scan position.
        """
        first = self._match_simple(i)
        if first is None:
            return None
        a, j = first
        conn = self.tok(j)
        connectors = {closer} if closer is not None else _RANGE_CONNECTORS
        if (
            conn is not None
            and conn.norm in connectors
            and a.kind is not EntityKind.CLOCK
        ):
            second = self._match_simple(j + 1)
            if second is not None and second[0].kind is not EntityKind.CLOCK:
                b, k = second
                start, end = _entity_start(a), _entity_end(b)
                if start is not None and end is not None and start <= end:
                    rng = DateRange(start, end)
                    return TimeEntity(EntityKind.RANGE, rng, self.span(span_from, k)), k
        if span_from == i:
            return a, j
        return None

    # -- simple (non-combined) expressions, longest match first

    def _match_simple(self, i: int) -> tuple[TimeEntity, int] | None:
        tok = self.tok(i)
        if tok is None:
            return None
        if tok.norm in ("this", "last", "past", "previous"):
            hit = self._match_anchored(
                "this" if tok.norm == "this" else "last", i + 1, i
            )
            if hit is not None:
                return hit
            return None
        for fn in (
            self._match_iso,
            self._match_clock,
            self._match_holiday,
            self._match_month_expr,
            self._match_season,
            self._match_today,
            self._match_year,
        ):
            hit = fn(i)
            if hit is not None:
                return hit
        return None

    def _match_anchored(
        self, which: str, i: int, span_from: int
    ) -> tuple[TimeEntity, int] | None:
        tok = self.tok(i)
        if tok is None:
            return None
        # last/this <calendar unit>
        if tok.norm in _WINDOW_UNITS:
            rng = _calendar_unit(
                _WINDOW_UNITS[tok.norm], which, self.ref, self.frame.week_start
            )
            return self._entity(EntityKind.RANGE, rng, span_from, i + 1)
        # last N <unit>s
        if which == "last" and tok.num is not None and tok.clock is None:
            unit_tok = self.tok(i + 1)
            if unit_tok is not None and unit_tok.norm in _WINDOW_UNITS:
                n = int(tok.num)
                if n > 0 and tok.num == n:
                    rng = _window(_WINDOW_UNITS[unit_tok.norm], n, self.ref)
                    return self._entity(EntityKind.RANGE, rng, span_from, i + 2)
        # last/this <month name>
        month = self._month_at(i)
        if month is not None and not self._is_year(self.tok(i + 1)):
            rng = (
                _this_month(month, self.ref)
                if which == "this"
                else _last_month_of(month, self.ref)
            )
            return self._entity(EntityKind.RANGE, rng, span_from, i + 1)
        # last/this <season>
        if tok.norm in _SEASONS and not self._is_year(self.tok(i + 1)):
            rng = (
                _this_season(tok.norm, self.ref)
                if which == "this"
                else _last_season(tok.norm, self.ref)
            )
            return self._entity(EntityKind.RANGE, rng, span_from, i + 1)
        # last/this <holiday>
        hol = self._holiday_at(i)
        if hol is not None:
            name, j = hol
            try:
                day = (
                    _this_holiday(name, self.ref, self.frame)
                    if which == "this"
                    else _last_holiday(name, self.ref, self.frame)
                )
            except HolidayUnknown:
                return None
            return self._entity(EntityKind.DATE, day, span_from, j)
        return None

    def _match_iso(self, i: int) -> tuple[TimeEntity, int] | None:
        tok = self.tok(i)
        if tok is None or not re.fullmatch(r"\d{4}-\d{2}-\d{2}", tok.norm):
            return None
        try:
            day = date.fromisoformat(tok.norm)
        except ValueError:
            return None
        return self._entity(EntityKind.DATE, day, i, i + 1)

    def _match_clock(self, i: int) -> tuple[TimeEntity, int] | None:
        tok = self.tok(i)
        if tok is None:
            return None
        nxt = self.tok(i + 1)
        meridiem = nxt.norm if nxt is not None and nxt.norm in ("am", "pm") else None
        if tok.clock is not None:
            minutes = tok.clock
            j = i + 1
            hours, mins = divmod(minutes, 60)
            if meridiem is not None and hours <= 12:
                minutes = _apply_meridiem(hours, mins, meridiem)
                j = i + 2
            return self._entity(EntityKind.CLOCK, TimeOfDay(minutes), i, j)
        # "7 am" without minutes
        if (
            tok.num is not None
            and not tok.grouped
            and meridiem is not None
            and tok.num == int(tok.num)
            and 1 <= tok.num <= 12
        ):
            minutes = _apply_meridiem(int(tok.num), 0, meridiem)
            return self._entity(EntityKind.CLOCK, TimeOfDay(minutes), i, i + 2)
        return None

    def _holiday_at(self, i: int) -> tuple[str, int] | None:
        for words in self.holiday_phrases:
            n = len(words)
            toks = [self.tok(i + k) for k in range(n)]
            if any(t is None for t in toks):
                continue
            if all(t.norm == w for t, w in zip(toks, words)):
                return " ".join(words), i + n
        return None

    def _match_holiday(self, i: int) -> tuple[TimeEntity, int] | None:
        hol = self._holiday_at(i)
        if hol is None:
            return None
        name, j = hol
        year_tok = self.tok(j)
        try:
            if self._is_year(year_tok) and self._year_allowed(j):
                day = resolve_holiday(name, int(year_tok.num), self.frame)
                j += 1
            else:
                day = _this_holiday(name, self.ref, self.frame)
        except HolidayUnknown:
            return None
        return self._entity(EntityKind.DATE, day, i, j)

    def _match_month_expr(self, i: int) -> tuple[TimeEntity, int] | None:
        month = self._month_at(i)
        if month is not None:
            return self._month_leading(i, month)
        # day-first form: "27 August [2020]"
        tok = self.tok(i)
        if (
            tok is not None
            and tok.num is not None
            and not tok.grouped
            and tok.num == int(tok.num)
            and 1 <= tok.num <= 31
        ):
            month2 = self._month_at(i + 1)
            if month2 is not None:
                day = int(tok.num)
                year_tok = self.tok(i + 2)
                if self._is_year(year_tok) and self._year_allowed(i + 2):
                    value = _checked_date(int(year_tok.num), month2, day)
                    if value is None:
                        return None
                    return self._entity(EntityKind.DATE, value, i, i + 3)
                if day > calendar.monthrange(2000, month2)[1]:
                    return None
                return self._entity(
                    EntityKind.DATE, _this_date(month2, day, self.ref), i, i + 2
                )
        return None

    def _month_leading(self, i: int, month: int) -> tuple[TimeEntity, int] | None:
        nxt = self.tok(i + 1)
        # "January 2018" -> whole month of that year
        if self._is_year(nxt) and self._year_allowed(i + 1):
            return self._entity(
                EntityKind.RANGE, month_range(int(nxt.num), month), i, i + 2
            )
        # "January 1[, 2019]"
        if (
            nxt is not None
            and nxt.num is not None
            and not nxt.grouped
            and nxt.num == int(nxt.num)
            and 1 <= nxt.num <= 31
        ):
            day = int(nxt.num)
            j = i + 2
            k = j
            if (c := self.tok(k)) is not None and c.norm == ",":
                k += 1
            year_tok = self.tok(k)
            if self._is_year(year_tok) and self._year_allowed(k):
                value = _checked_date(int(year_tok.num), month, day)
                if value is not None:
                    return self._entity(EntityKind.DATE, value, i, k + 1)
            if day <= calendar.monthrange(2000, month)[1]:
                return self._entity(
                    EntityKind.DATE, _this_date(month, day, self.ref), i, j
                )
            # impossible day-of-month: keep the bare month
            return self._entity(
                EntityKind.RANGE, _this_month(month, self.ref), i, i + 1
            )
        # bare month resolves to its most recent occurrence
        return self._entity(EntityKind.RANGE, _this_month(month, self.ref), i, i + 1)

    def _match_season(self, i: int) -> tuple[TimeEntity, int] | None:
        tok = self.tok(i)
        if tok is None or tok.norm not in _SEASONS:
            return None
        nxt = self.tok(i + 1)
        if self._is_year(nxt) and self._year_allowed(i + 1):
            return self._entity(
                EntityKind.RANGE, resolve_season(tok.norm, int(nxt.num)), i, i + 2
            )
        # "summer this year" / "summer last year"
        if (
            nxt is not None
            and nxt.norm in ("this", "last")
            and (yr := self.tok(i + 2)) is not None
            and yr.norm == "year"
        ):
            year = self.ref.year if nxt.norm == "this" else self.ref.year - 1
            return self._entity(
                EntityKind.RANGE, resolve_season(tok.norm, year), i, i + 3
            )
        return self._entity(
            EntityKind.RANGE, _this_season(tok.norm, self.ref), i, i + 1
        )

    def _match_today(self, i: int) -> tuple[TimeEntity, int] | None:
        tok = self.tok(i)
        if tok is None:
            return None
        if tok.norm == "today":
            return self._entity(EntityKind.DATE, self.ref, i, i + 1)
        if tok.norm == "yesterday":
            return self._entity(
                EntityKind.DATE, self.ref - timedelta(days=1), i, i + 1
            )
        return None

    def _match_year(self, i: int) -> tuple[TimeEntity, int] | None:
        tok = self.tok(i)
        if not self._is_year(tok) or not self._year_allowed(i):
            return None
        return self._entity(EntityKind.RANGE, year_range(int(tok.num)), i, i + 1)


def _apply_meridiem(hours: int, minutes: int, meridiem: str) -> int:
    if meridiem == "am":
        hours = 0 if hours == 12 else hours
    else:
        hours = 12 if hours == 12 else hours + 12
    return hours * 60 + minutes


def _checked_date(year: int, month: int, day: int) -> date | None:
    try:
        return date(year, month, day)
    except ValueError:
        return None


def _entity_start(entity: TimeEntity) -> date | None:
    if entity.kind is EntityKind.DATE:
        return entity.value
    if entity.kind is EntityKind.RANGE:
        return entity.value.start
    return None


def _entity_end(entity: TimeEntity) -> date | None:
    if entity.kind is EntityKind.DATE:
        return entity.value
    if entity.kind is EntityKind.RANGE:
        return entity.value.end
    return None


def parse_time_expressions(text: str, frame: ReferenceFrame) -> list[TimeEntity]:
    """Extract all maximal, non-overlapping temporal entities, left to right.

    Text with no temporal content yields an empty list; deciding what that
    means is the caller's business.
    """
    if not text:
        return []
    return _Matcher(text, tokenize(text), frame).parse()
