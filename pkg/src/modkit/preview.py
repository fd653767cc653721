"""Live preview: which stored comments would a candidate phrase catch.

The result lists matched comments (newest first) and flags the ones no
currently configured phrase already catches, with a count of those
uncaught comments. The caught set depends only on the existing
configuration and corpus, so it is cached per (config, corpus)
generation and shared by consecutive keystrokes.
"""

from __future__ import annotations

from . import patterns
from .errors import OwnerNotFound
from .models import PreviewMatch, PreviewResult
from .scanning import compile_phrase_cached, load_config
from .store import Store

# Preview lists at most this many comments; the uncaught count still
# covers the whole corpus.
MAX_LISTED = 500


def _corpus_texts(store: Store, owner_id: str, corpus_generation: int) -> list[tuple[str, str]]:
    """(comment_id, text) newest first, cached per corpus generation."""
    key = ("corpus_texts", owner_id)
    cached = store.cache.get(key)
    if cached is not None and cached[0] == corpus_generation:
        return cached[1]
    rows = [(c.comment_id, c.text) for c in store.comments_for_owner(owner_id, newest_first=True)]
    store.cache[key] = (corpus_generation, rows)
    return rows


def _caught_comment_ids(store: Store, owner_id: str) -> set[str]:
    """Comment ids matched by any configured phrase, cached per generation."""
    owner = store.get_owner(owner_id)
    if owner is None:
        raise OwnerNotFound(owner_id)
    key = ("caught", owner_id)
    cached = store.cache.get(key)
    if cached is not None and cached[0] == (owner.config_generation, owner.corpus_generation):
        return cached[1]
    config = load_config(store, owner_id)
    caught: set[str] = set()
    if config.entries:
        for comment_id, text in _corpus_texts(store, owner_id, owner.corpus_generation):
            if config.matches_any(text):
                caught.add(comment_id)
    store.cache[key] = ((owner.config_generation, owner.corpus_generation), caught)
    return caught


def preview_phrase(store: Store, owner_id: str, candidate_text: str, options) -> PreviewResult:
    """Evaluate a candidate phrase against the owner's stored comments."""
    compiled = compile_phrase_cached(candidate_text.strip(), options)
    with store.snapshot():
        owner = store.get_owner(owner_id)
        if owner is None:
            raise OwnerNotFound(owner_id)
        caught = _caught_comment_ids(store, owner_id)
        matches: list[PreviewMatch] = []
        uncaught = 0
        total = 0
        for comment_id, text in _corpus_texts(store, owner_id, owner.corpus_generation):
            spans = patterns.find_matches(compiled, text)
            if not spans:
                continue
            total += 1
            already = comment_id in caught
            if not already:
                uncaught += 1
            if len(matches) < MAX_LISTED:
                matches.append(
                    PreviewMatch(comment_id=comment_id, spans=spans, already_caught=already)
                )
    return PreviewResult(
        candidate_text=compiled.source_phrase_text,
        matches=matches,
        uncaught_count=uncaught,
        total_matched=total,
    )


class PreviewSession:
    """Incremental preview bound to one owner.

    Each keystroke's result is exactly what a fresh preview_phrase call
    would return; the session only carries the owner binding so repeated
    calls reuse the store-level caches.
    """

    def __init__(self, store: Store, owner_id: str):
        if store.get_owner(owner_id) is None:
            raise OwnerNotFound(owner_id)
        self.store = store
        self.owner_id = owner_id

    def preview(self, text: str, options) -> PreviewResult:
        return preview_phrase(self.store, self.owner_id, text, options)
