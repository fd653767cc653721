"""Creator-led comment moderation: word-filter catalogs, live preview,
audit analytics, and a polling ingestion pipeline."""

from .models import (
    ActionStatus,
    BuiltinCategory,
    Category,
    CommentRecord,
    CommentStatus,
    CompiledPattern,
    MatchAction,
    MatchEvent,
    MatchSpan,
    Phrase,
    PhraseOptions,
    PreviewResult,
    Provenance,
    TimeSeries,
)
from .patterns import compile_phrase, find_matches, match_all
from .store import Store, open_store

__all__ = [
    "ActionStatus",
    "BuiltinCategory",
    "Category",
    "CommentRecord",
    "CommentStatus",
    "CompiledPattern",
    "MatchAction",
    "MatchEvent",
    "MatchSpan",
    "Phrase",
    "PhraseOptions",
    "PreviewResult",
    "Provenance",
    "Store",
    "TimeSeries",
    "compile_phrase",
    "find_matches",
    "match_all",
    "open_store",
]

__version__ = "0.1.0"
