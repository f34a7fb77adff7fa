"""Tokenizer shared by the time parser and the command interpreter.

Splits raw text into lowercase tokens that keep their character spans in
the original string, and collapses spelled-out numbers ("ten thousand")
and comma-grouped digits ("10,000") into single numeric tokens so that
later pattern matching only ever sees plain numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

_TOKEN_RE = re.compile(
    r"""
      \d{4}-\d{2}-\d{2}          # ISO calendar date
    | \d{1,2}:\d{2}(?::\d{2})?   # clock digits hh:mm[:ss]
    | \d{1,3}(?:,\d{3})+         # comma-grouped integer
    | \d+(?:\.\d+)?(?:st|nd|rd|th)?  # number, optionally ordinal
    | [A-Za-z][A-Za-z']*         # word (keeps apostrophes: "year's")
    | \S                         # any other symbol, one char at a time
    """,
    re.VERBOSE,
)

_ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_CLOCK_RE = re.compile(r"^(\d{1,2}):(\d{2})(?::\d{2})?$")
_GROUPED_NUM_RE = re.compile(r"^\d{1,3}(?:,\d{3})+$")
_PLAIN_NUM_RE = re.compile(r"^(\d+(?:\.\d+)?)(st|nd|rd|th)?$")

_UNITS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
    "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18,
    "nineteen": 19,
}
_TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50,
    "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
}
_SCALES = {"hundred": 100, "thousand": 1_000, "million": 1_000_000}


@dataclass(frozen=True)
class Token:
    """One lexical unit with its span in the source text."""

    text: str        # original slice
    norm: str        # lowercased form
    start: int
    end: int
    num: float | None = None     # numeric value for number tokens
    grouped: bool = False        # written with commas or spelled out
    clock: int | None = None     # minutes since midnight for hh:mm digits
    tags: frozenset[str] = frozenset()  # lexicon tags, attached by normalize

    @property
    def is_word(self) -> bool:
        return self.norm[:1].isalpha()


def tokenize(text: str) -> list[Token]:
    """Split *text* into tokens; numeric and clock forms carry parsed values."""
    out: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        raw = m.group(0)
        tok = Token(text=raw, norm=raw.lower(), start=m.start(), end=m.end())
        if _ISO_DATE_RE.match(raw):
            pass  # timeparse interprets ISO tokens itself
        elif (cm := _CLOCK_RE.match(raw)) is not None:
            hh, mm = int(cm.group(1)), int(cm.group(2))
            if hh < 24 and mm < 60:
                tok = replace(tok, clock=hh * 60 + mm)
        elif _GROUPED_NUM_RE.match(raw):
            tok = replace(tok, num=float(raw.replace(",", "")), grouped=True)
        elif (nm := _PLAIN_NUM_RE.match(raw)) is not None:
            tok = replace(tok, num=float(nm.group(1)))
        out.append(tok)
    return collapse_number_words(text, out)


def collapse_number_words(text: str, tokens: list[Token]) -> list[Token]:
    """Merge runs of spelled-out number words into single numeric tokens."""
    out: list[Token] = []
    i = 0
    while i < len(tokens):
        value_i = _number_run(tokens, i)
        if value_i is None:
            out.append(tokens[i])
            i += 1
            continue
        value, j = value_i
        first, last = tokens[i], tokens[j - 1]
        out.append(
            Token(
                text=text[first.start:last.end],
                norm=text[first.start:last.end].lower(),
                start=first.start,
                end=last.end,
                num=float(value),
                grouped=True,
            )
        )
        i = j
    return out


def _number_run(tokens: list[Token], i: int) -> tuple[int, int] | None:
    """Parse a spelled number starting at *i*; returns (value, next index)."""
    total = 0
    current = 0
    j = i
    seen = False
    prev = ""
    while j < len(tokens):
        w = tokens[j].norm
        if w in _UNITS:
            current += _UNITS[w]
        elif w in _TENS:
            current += _TENS[w]
        elif w == "hundred" and seen:
            current = max(current, 1) * 100
        elif w in _SCALES and w != "hundred" and seen:
            total += max(current, 1) * _SCALES[w]
            current = 0
        elif (
            seen
            and (w == "-" and prev in _TENS or w == "and" and prev in _SCALES)
            and j + 1 < len(tokens)
            and (tokens[j + 1].norm in _UNITS or tokens[j + 1].norm in _TENS)
        ):
            prev = w
            j += 1
            continue
        else:
            break
        seen = True
        prev = w
        j += 1
    if not seen:
        return None
    return total + current, j
