"""Phrase compilation and matching.

A phrase is compiled to a regex whose shape follows the per-phrase
options:

* the phrase is split on whitespace runs; tokens are joined back with
  ``\\s+`` so any whitespace separates them in comment text;
* with spelling variants, every alphabetic character matches one or more
  repetitions of itself ("shit" catches "shiiit" and "shittt") and the
  final token accepts an optional plural suffix "s" or "es";
* with the leet tier, characters from the substitution table
  (a/4/@, e/3, i/1/!, o/0, s/5/$, t/7) match any glyph of their group;
* matches are anchored so they never sit flush against an alphanumeric
  character ("shit" never matches inside "mishit").

Compilation and matching are pure; compiled patterns are immutable and
safe to share across threads.
"""

from __future__ import annotations

import re
import time

from .errors import EmptyPhrase, InvalidPhrase, PhraseTooLong
from .models import CompiledPattern, MatchSpan, PhraseOptions

MAX_PHRASE_LENGTH = 256

# Each group is interchangeable under the leet tier, whichever member the
# phrase author typed.
LEET_GROUPS = (
    ("a", "4", "@"),
    ("e", "3"),
    ("i", "1", "!"),
    ("o", "0"),
    ("s", "5", "$"),
    ("t", "7"),
)

_LEET_BY_CHAR: dict[str, tuple[str, ...]] = {}
for _group in LEET_GROUPS:
    for _ch in _group:
        _LEET_BY_CHAR[_ch] = _group

# "Word" here means alphanumeric only: underscores and punctuation act as
# boundaries, unlike regex \b.
_BOUNDARY_LEFT = r"(?<![^\W_])"
_BOUNDARY_RIGHT = r"(?![^\W_])"

_CONTROL_RE = re.compile(r"[\x00-\x08\x0b\x0c\x0e-\x1f\x7f]")


def _glyph_class(glyphs: tuple[str, ...]) -> str:
    if len(glyphs) == 1:
        return re.escape(glyphs[0])
    return "[" + "".join(re.escape(g) for g in glyphs) + "]"


def _leet_glyphs(ch: str) -> tuple[str, ...]:
    group = _LEET_BY_CHAR.get(ch.lower())
    if group is None:
        return (ch,)
    if ch.isalpha():
        # Preserve the typed case of the letter; the symbols carry no case.
        return (ch,) + tuple(g for g in group if not g.isalpha())
    return group


def _token_pattern(token: str, options: PhraseOptions, final: bool) -> str:
    pieces: list[str] = []
    for ch in token:
        if not options.spell_variants:
            pieces.append(re.escape(ch))
            continue
        glyphs = _leet_glyphs(ch) if options.leet_variants else (ch,)
        cls = _glyph_class(glyphs)
        if ch.isalpha():
            pieces.append(cls + "+")
        else:
            pieces.append(cls)
    if final and options.spell_variants:
        pieces.append("(?:s|es)?")
    return "".join(pieces)


def compile_phrase(text: str, options: PhraseOptions, *, now: float | None = None) -> CompiledPattern:
    """Compile a phrase into an executable matcher.

    Raises EmptyPhrase for blank text, PhraseTooLong above 256 characters
    and InvalidPhrase when the text contains control characters.
    """
    trimmed = text.strip()
    if not trimmed:
        raise EmptyPhrase("phrase text is blank")
    if len(trimmed) > MAX_PHRASE_LENGTH:
        raise PhraseTooLong(f"phrase exceeds {MAX_PHRASE_LENGTH} characters")
    if _CONTROL_RE.search(trimmed):
        raise InvalidPhrase("phrase contains control characters")

    tokens = trimmed.split()
    body = r"\s+".join(
        _token_pattern(tok, options, final=(i == len(tokens) - 1)) for i, tok in enumerate(tokens)
    )
    flags = re.UNICODE
    if not options.case_sensitive:
        flags |= re.IGNORECASE
    regex = re.compile(_BOUNDARY_LEFT + body + _BOUNDARY_RIGHT, flags)
    return CompiledPattern(
        source_phrase_text=trimmed,
        options=options,
        pattern=regex,
        compiled_at=time.time() if now is None else now,
    )


def _to_byte_spans(text: str, char_spans: list[tuple[int, int]]) -> list[MatchSpan]:
    if not char_spans:
        return []
    if text.isascii():
        return [MatchSpan(s, e) for s, e in char_spans]
    cum = [0]
    for ch in text:
        cum.append(cum[-1] + len(ch.encode("utf-8")))
    return [MatchSpan(cum[s], cum[e]) for s, e in char_spans]


def find_matches(pattern: CompiledPattern, text: str) -> list[MatchSpan]:
    """All non-overlapping leftmost matches as byte spans, by start offset."""
    char_spans = [(m.start(), m.end()) for m in pattern.pattern.finditer(text)]
    return _to_byte_spans(text, char_spans)


def match_all(patterns: list[CompiledPattern], text: str) -> dict[int, list[MatchSpan]]:
    """Per-pattern match spans, keyed by the pattern's index."""
    return {i: find_matches(p, text) for i, p in enumerate(patterns)}


def matches(pattern: CompiledPattern, text: str) -> bool:
    """True when the pattern matches anywhere in the text."""
    return pattern.pattern.search(text) is not None
