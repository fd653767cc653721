"""Shared machinery for evaluating an owner's configured phrases.

Both preview and ingestion need "every phrase currently linked to at
least one category, compiled, with the categories that reference it".
Compilation results are memoized; compiled patterns are immutable so the
cache is safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import patterns
from .models import CompiledPattern, MatchSpan, Phrase, PhraseOptions
from .store import Store


@lru_cache(maxsize=4096)
def _compile_cached(text: str, case_sensitive: bool, spell_variants: bool, leet_variants: bool) -> CompiledPattern:
    options = PhraseOptions(
        case_sensitive=case_sensitive,
        spell_variants=spell_variants,
        leet_variants=leet_variants,
    )
    return patterns.compile_phrase(text, options)


def compile_phrase_cached(text: str, options: PhraseOptions) -> CompiledPattern:
    return _compile_cached(
        text, options.case_sensitive, options.spell_variants, options.leet_variants
    )


@dataclass
class ConfigEntry:
    phrase: Phrase
    compiled: CompiledPattern
    category_ids: list[str]


@dataclass
class ConfigSnapshot:
    owner_id: str
    config_generation: int
    entries: list[ConfigEntry]

    def match_comment(self, text: str) -> list[tuple[ConfigEntry, list[MatchSpan]]]:
        """Entries whose phrase matches the text, with their spans."""
        hits = []
        for entry in self.entries:
            spans = patterns.find_matches(entry.compiled, text)
            if spans:
                hits.append((entry, spans))
        return hits

    def matches_any(self, text: str) -> bool:
        return any(patterns.matches(entry.compiled, text) for entry in self.entries)


def load_config(store: Store, owner_id: str) -> ConfigSnapshot:
    owner = store.get_owner(owner_id)
    generation = owner.config_generation if owner else 0
    entries = [
        ConfigEntry(
            phrase=phrase,
            compiled=compile_phrase_cached(phrase.text, phrase.options),
            category_ids=category_ids,
        )
        for phrase, category_ids in store.configured_phrases(owner_id)
    ]
    return ConfigSnapshot(owner_id=owner_id, config_generation=generation, entries=entries)
