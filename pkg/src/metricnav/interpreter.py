"""Turn one utterance plus an interaction context into exactly one outcome.

The pipeline is normalize -> extract_parameters -> infer_intent. It is a
pure function of (text, context): the same utterance with the same pressed
element on the same screen always produces the same outcome, and any junk
input degrades to an Unrecognized verdict rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import timeparse
from .lexicon import Lexicon, LexMatch, default_lexicon
from .model import (
    Aspect,
    Comparator,
    CompareCyclical,
    CompareTwoRanges,
    ConditionSpec,
    CycleType,
    DataSourceType,
    InteractionContext,
    InterpretOutcome,
    Invalid,
    InvalidReason,
    NavigateDetail,
    Ok,
    Page,
    PressedKind,
    Quantity,
    ReplaceComparisonRange,
    RunQuery,
    SetDataSource,
    SetEndDate,
    SetRange,
    SetStartDate,
    Unrecognized,
    validate_condition,
)
from .timeparse import DateRange, EntityKind, ReferenceFrame, TimeEntity
from .tokens import Token, tokenize

# How an operand unit constrains the data source it measures.
_UNIT_SOURCES = {
    "steps": DataSourceType.STEP_COUNT,
    "hours": DataSourceType.HOURS_SLEPT,
    "bpm": DataSourceType.RESTING_HEART_RATE,
    "kg": DataSourceType.WEIGHT,
    "lb": DataSourceType.WEIGHT,
}

_CLOCK_COMPARATORS = {"earlier": Comparator.LT, "later": Comparator.GT}
_VALUE_COMPARATORS = {
    "gt": Comparator.GT,
    "gte": Comparator.GTE,
    "lt": Comparator.LT,
    "lte": Comparator.LTE,
    "max": Comparator.MAX,
    "min": Comparator.MIN,
}

SUGGEST_PRESS_PLOT = (
    "Press one of the aggregation plots while speaking to pick the period to replace."
)


@dataclass(frozen=True)
class Tokens:
    """Normalized token list that remembers the raw text it came from."""

    text: str
    items: list[Token]

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


@dataclass
class ParameterSet:
    """Parameters identified in one utterance, before intent inference.

    ``entities`` holds the date/range entities not consumed as a condition
    operand; a clock operand is moved into the condition itself.
    """

    sources: list[DataSourceType] = field(default_factory=list)
    entities: list[TimeEntity] = field(default_factory=list)
    cycle: CycleType | None = None
    condition: ConditionSpec | None = None
    verbs: list[str] = field(default_factory=list)

    @property
    def has_compare(self) -> bool:
        return "compare" in self.verbs


def normalize(text: str, lex: Lexicon | None = None) -> Tokens:
    """Lowercased tokens with spans; numbers collapsed; lexicon tags attached."""
    toks = tokenize(text)
    lex = lex or default_lexicon()
    tagged = list(toks)
    for m in lex.match(toks):
        for k in range(m.tok_start, m.tok_end):
            tagged[k] = replace(tagged[k], tags=m.tags)
    return Tokens(text=text, items=tagged)


def extract_parameters(
    tokens: Tokens, frame: ReferenceFrame, lex: Lexicon | None = None
) -> ParameterSet:
    """Identify data sources, periods, cycle keywords, and a query condition."""
    lex = lex or default_lexicon()
    entities = timeparse.parse_time_expressions(tokens.text, frame)
    blocked = [e.span for e in entities]
    matches = [
        m for m in lex.match(tokens.items) if not _overlaps(m.span, blocked)
    ]

    params = ParameterSet()
    params.verbs = [
        m.value("verb:") for m in matches if m.has("verb:")
    ]

    seen: set[DataSourceType] = set()
    for m in matches:
        if (s := m.value("source:")) is not None:
            src = DataSourceType(s)
            if src not in seen:
                seen.add(src)
                params.sources.append(src)

    for m in matches:
        if (c := m.value("cycle:")) is not None:
            params.cycle = CycleType(c)
            break

    condition, consumed = _extract_condition(tokens, matches, entities)
    params.condition = condition
    params.entities = [
        e for e in entities if e.kind is not EntityKind.CLOCK and e is not consumed
    ]
    return params


def _overlaps(span: tuple[int, int], blocked: list[tuple[int, int]]) -> bool:
    return any(span[0] < b_end and b_start < span[1] for b_start, b_end in blocked)


def _extract_condition(
    tokens: Tokens, matches: list[LexMatch], entities: list[TimeEntity]
) -> tuple[ConditionSpec | None, TimeEntity | None]:
    """Assemble a ConditionSpec from comparator/aspect/operand evidence.

    Returns the condition plus the clock entity it consumed, if any.
    """
    goal = next((m for m in matches if m.has("goal:")), None)
    if goal is not None:
        return (
            ConditionSpec(
                aspect=Aspect.GOAL_REF,
                source=DataSourceType.STEP_COUNT,
                comparator=Comparator.GTE,
                operand=None,
            ),
            None,
        )

    cmp_match = next((m for m in matches if m.has("cmp:")), None)
    if cmp_match is None:
        return None, None
    cmp_tag = cmp_match.value("cmp:")

    aspect, implied = _aspect_evidence(matches)
    named = next(
        (DataSourceType(m.value("source:")) for m in matches if m.has("source:")),
        None,
    )

    if cmp_tag in _CLOCK_COMPARATORS:
        comparator = _CLOCK_COMPARATORS[cmp_tag]
        if aspect not in (Aspect.BEDTIME, Aspect.WAKE_TIME):
            return None, None  # cannot tell bedtime from wake time
        clock = _clock_after(entities, cmp_match.span[1])
        if clock is None:
            return None, None
        return (
            ConditionSpec(
                aspect=aspect,
                source=DataSourceType.SLEEP_RANGE,
                comparator=comparator,
                operand=clock.value,
            ),
            clock,
        )

    comparator = _VALUE_COMPARATORS[cmp_tag]
    if comparator in (Comparator.MIN, Comparator.MAX):
        source = implied or named
        if aspect in (Aspect.BEDTIME, Aspect.WAKE_TIME):
            source = DataSourceType.SLEEP_RANGE
        return ConditionSpec(aspect, source, comparator, None), None

    # threshold comparison on a clock time ("bedtimes later than" is tagged
    # later; "wake time under 7:00"-style phrasing lands here)
    clock = _clock_after(entities, cmp_match.span[1])
    if aspect in (Aspect.BEDTIME, Aspect.WAKE_TIME):
        if clock is None:
            return None, None
        return (
            ConditionSpec(aspect, DataSourceType.SLEEP_RANGE, comparator, clock.value),
            clock,
        )

    operand, unit = _quantity_after(tokens, matches, cmp_match, entities)
    if operand is None:
        return None, None
    source = implied or named or _UNIT_SOURCES.get(unit or "")
    return ConditionSpec(Aspect.VALUE, source, comparator, operand), None


def _aspect_evidence(
    matches: list[LexMatch],
) -> tuple[Aspect, DataSourceType | None]:
    """Aspect plus the source that aspect evidence implies, if any."""
    for m in matches:
        if (a := m.value("aspect:")) is not None:
            return Aspect(a), DataSourceType.SLEEP_RANGE
    for m in matches:
        if (cv := m.value("condverb:")) is not None:
            return Aspect.VALUE, DataSourceType(cv)
    return Aspect.VALUE, None


def _clock_after(entities: list[TimeEntity], pos: int) -> TimeEntity | None:
    for e in entities:
        if e.kind is EntityKind.CLOCK and e.span[0] >= pos:
            return e
    return next((e for e in entities if e.kind is EntityKind.CLOCK), None)


def _quantity_after(
    tokens: Tokens,
    matches: list[LexMatch],
    cmp_match: LexMatch,
    entities: list[TimeEntity],
) -> tuple[Quantity | None, str | None]:
    blocked = [e.span for e in entities]
    for idx in range(cmp_match.tok_end, len(tokens.items)):
        tok = tokens.items[idx]
        if tok.num is None or _overlaps((tok.start, tok.end), blocked):
            continue
        unit = None
        for m in matches:
            if m.tok_start == idx + 1 and m.has("unit:"):
                unit = m.value("unit:")
                break
        return Quantity(value=tok.num, unit=unit), unit
    return None, None


def infer_intent(params: ParameterSet, ctx: InteractionContext) -> InterpretOutcome:
    """Decide the operation from parameters, the screen, and the pressed element."""
    dates = [e.value for e in params.entities if e.kind is EntityKind.DATE]
    ranges = [e.value for e in params.entities if e.kind is EntityKind.RANGE]

    # 1. touch+speech on a date label expects exactly one date
    if ctx.pressed.kind in (PressedKind.START_DATE_LABEL, PressedKind.END_DATE_LABEL):
        if len(dates) == 1 and not ranges:
            if ctx.pressed.kind is PressedKind.START_DATE_LABEL:
                return Ok(SetStartDate(dates[0]))
            return Ok(SetEndDate(dates[0]))
        if ranges:
            return Invalid(
                InvalidReason.INCOMPATIBLE_PARAMETER,
                "A single date is needed here, not a period.",
            )

    # 2. touch+speech on an aggregation plot expects exactly one period
    if ctx.pressed.kind is PressedKind.AGGREGATION_PLOT:
        if len(ranges) == 1 and not dates:
            return Ok(ReplaceComparisonRange(ctx.pressed.slot, ranges[0]))
        if dates and not ranges:
            return Invalid(
                InvalidReason.INCOMPATIBLE_PARAMETER,
                "A period is needed here, not a single date.",
            )

    if len(ranges) >= 3:
        return Invalid(
            InvalidReason.AMBIGUOUS_SLOT,
            "Too many periods; name at most two.",
        )

    # 3. data-driven query
    if params.condition is not None:
        if ctx.page in (Page.TWO_RANGE, Page.CYCLICAL):
            return Invalid(
                InvalidReason.UNSUPPORTED_ON_PAGE,
                "Queries are not supported on comparison pages.",
            )
        cond = params.condition
        if cond.source is None:
            if ctx.page is Page.DETAIL and ctx.current_source is not None:
                cond = ConditionSpec(
                    cond.aspect, ctx.current_source, cond.comparator, cond.operand
                )
            else:
                return Invalid(
                    InvalidReason.UNKNOWN_DATA_SOURCE,
                    "Name a data source for this query.",
                )
        if (problem := validate_condition(cond)) is not None:
            return Invalid(InvalidReason.INCOMPATIBLE_PARAMETER, problem.capitalize() + ".")
        if len(ranges) > 1:
            return Invalid(
                InvalidReason.AMBIGUOUS_SLOT,
                "A query takes at most one period.",
            )
        return Ok(RunQuery(cond, ranges[0] if ranges else None))

    # 4. two-range comparison
    if params.has_compare or len(ranges) == 2:
        if len(ranges) == 2:
            range_a, range_b = ranges
        elif len(ranges) == 1:
            if ctx.page is Page.TWO_RANGE and ctx.pressed.kind is PressedKind.NONE:
                return Invalid(
                    InvalidReason.AMBIGUOUS_SLOT,
                    "Either period of the comparison could change.",
                    suggestion=SUGGEST_PRESS_PLOT,
                )
            range_a, range_b = ranges[0], ctx.current_range
        else:
            return Invalid(
                InvalidReason.MISSING_PERIODS,
                "Name the periods to compare.",
            )
        source, defaulted = _comparison_source(params, ctx)
        return Ok(CompareTwoRanges(source, range_a, range_b, source_defaulted=defaulted))

    # 5. cyclical comparison
    if params.cycle is not None:
        rng = ranges[0] if ranges else ctx.current_range
        source, defaulted = _comparison_source(params, ctx)
        return Ok(CompareCyclical(source, rng, params.cycle, source_defaulted=defaulted))

    # 6. data source, optionally scoped to a period
    if params.sources:
        source = params.sources[0]
        if ranges:
            return Ok(NavigateDetail(source, ranges[0]))
        if len(dates) == 1:
            return Ok(NavigateDetail(source, DateRange(dates[0], dates[0])))
        return Ok(SetDataSource(source))

    # 7. bare period navigation
    if len(ranges) == 1 and not dates:
        if ctx.page is Page.TWO_RANGE and ctx.pressed.kind is PressedKind.NONE:
            return Invalid(
                InvalidReason.AMBIGUOUS_SLOT,
                "Either period of the comparison could change.",
                suggestion=SUGGEST_PRESS_PLOT,
            )
        return Ok(SetRange(ranges[0]))
    if len(dates) == 1 and not ranges and ctx.pressed.kind is PressedKind.NONE:
        return Ok(SetRange(DateRange(dates[0], dates[0])))

    # 8. nothing usable
    return Unrecognized("")


def _comparison_source(
    params: ParameterSet, ctx: InteractionContext
) -> tuple[DataSourceType, bool]:
    if params.sources:
        return params.sources[0], False
    if ctx.current_source is not None:
        return ctx.current_source, False
    return DataSourceType.STEP_COUNT, True


def interpret(
    text: str, ctx: InteractionContext, lex: Lexicon | None = None
) -> InterpretOutcome:
    """Interpret one utterance in context; pure and total."""
    if not text or not text.strip():
        return Unrecognized(text)
    lex = lex or default_lexicon()
    tokens = normalize(text, lex)
    params = extract_parameters(tokens, ctx.frame, lex)
    outcome = infer_intent(params, ctx)
    if isinstance(outcome, Unrecognized):
        return Unrecognized(text)
    return outcome
