"""Keyword lexicon: surface phrases mapped to interpreter tags.

The default lexicon ships as a packaged TSV ("surface form<TAB>tag");
a custom file in the same format can be loaded instead. Matching is
longest-phrase-first over the normalized token stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .tokens import Token


@dataclass(frozen=True)
class LexMatch:
    phrase: str
    tags: frozenset[str]
    tok_start: int
    tok_end: int  # exclusive token index
    span: tuple[int, int]  # character interval

    def has(self, prefix: str) -> bool:
        return any(t.startswith(prefix) for t in self.tags)

    def value(self, prefix: str) -> str | None:
        for t in self.tags:
            if t.startswith(prefix):
                return t[len(prefix):]
        return None


class Lexicon:
    def __init__(self, entries: dict[str, set[str]]):
        self._phrases: dict[tuple[str, ...], frozenset[str]] = {
            tuple(surface.split()): frozenset(tags)
            for surface, tags in entries.items()
        }
        self._max_len = max((len(k) for k in self._phrases), default=1)

    def match(self, tokens: list[Token]) -> list[LexMatch]:
        """Non-overlapping longest matches, left to right."""
        out: list[LexMatch] = []
        i = 0
        n = len(tokens)
        while i < n:
            hit = None
            for width in range(min(self._max_len, n - i), 0, -1):
                words = tuple(tokens[i + k].norm for k in range(width))
                tags = self._phrases.get(words)
                if tags is not None:
                    hit = LexMatch(
                        phrase=" ".join(words),
                        tags=tags,
                        tok_start=i,
                        tok_end=i + width,
                        span=(tokens[i].start, tokens[i + width - 1].end),
                    )
                    break
            if hit is None:
                i += 1
            else:
                out.append(hit)
                i = hit.tok_end
        return out


def load_lexicon(path: str | Path | None = None) -> Lexicon:
    """Load a lexicon file; None loads the packaged default."""
    if path is None:
        source = resources.files("metricnav").joinpath("data/lexicon.tsv")
        text = source.read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    entries: dict[str, set[str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        try:
            surface, tag = line.split("\t")
        except ValueError as exc:
            raise ValueError(f"lexicon line {lineno}: expected 'surface<TAB>tag'") from exc
        entries.setdefault(surface.strip().lower(), set()).add(tag.strip())
    return Lexicon(entries)


_default: Lexicon | None = None


def default_lexicon() -> Lexicon:
    global _default
    if _default is None:
        _default = load_lexicon()
    return _default
