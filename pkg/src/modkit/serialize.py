"""JSON views of domain objects.

Used by both the HTTP handlers and the CLI so the two surfaces emit the
same shapes, and so API responses can be checked for equality against
direct module calls.
"""

from __future__ import annotations

from datetime import datetime, timezone

from .analytics import CommentPage, CommentRow
from .errors import ModerationError
from .models import (
    BuiltinCategory,
    Category,
    CommentRecord,
    MatchEvent,
    Phrase,
    PollOutcome,
    PreviewResult,
    TimeSeries,
)
from .store import Store


def iso(ts: float) -> str:
    return datetime.fromtimestamp(ts, timezone.utc).isoformat()


def error_view(exc: ModerationError) -> dict:
    return {"error": exc.code, "message": str(exc)}


def phrase_view(phrase: Phrase) -> dict:
    return {
        "phrase_id": phrase.phrase_id,
        "text": phrase.text,
        "case_sensitive": phrase.options.case_sensitive,
        "spell_variants": phrase.options.spell_variants,
        "leet_variants": phrase.options.leet_variants,
        "action": phrase.action.value,
    }


def category_view(store: Store, category: Category) -> dict:
    provenance: dict = {"kind": category.provenance.kind.value}
    if category.provenance.source_user_id is not None:
        provenance["source_user_id"] = category.provenance.source_user_id
    if category.provenance.source_id is not None:
        provenance["source_id"] = category.provenance.source_id
    if category.provenance.snapshot_version is not None:
        provenance["snapshot_version"] = category.provenance.snapshot_version
    return {
        "category_id": category.category_id,
        "name": category.name,
        "shared": category.shared,
        "version": category.version,
        "provenance": provenance,
        "created_at": iso(category.created_at),
        "phrases": [phrase_view(store.get_phrase(pid)) for pid in category.phrase_refs],
    }


def builtin_view(builtin: BuiltinCategory) -> dict:
    return {
        "builtin_id": builtin.builtin_id,
        "name": builtin.name,
        "description": builtin.description,
        "authors": builtin.authors,
        "rule_count": len(builtin.rules),
        "example_rules": builtin.example_rules,
        "import_count": builtin.import_count,
        "version": builtin.version,
    }


def comment_view(comment: CommentRecord) -> dict:
    return {
        "comment_id": comment.comment_id,
        "channel_id": comment.channel_id,
        "video_id": comment.video_id,
        "author_id": comment.author_id,
        "author_name": comment.author_name,
        "text": comment.text,
        "published_at": iso(comment.published_at),
        "fetched_at": iso(comment.fetched_at),
        "status": comment.status.value,
        "author_blocked": comment.author_blocked,
    }


def preview_view(store: Store, result: PreviewResult) -> dict:
    matches = []
    for match in result.matches:
        comment = store.get_comment(match.comment_id)
        matches.append(
            {
                "comment_id": match.comment_id,
                "spans": [list(s) for s in match.spans],
                "already_caught": match.already_caught,
                "text": comment.text if comment else "",
                "author_name": comment.author_name if comment else "",
                "published_at": iso(comment.published_at) if comment else None,
                "status": comment.status.value if comment else None,
            }
        )
    return {
        "candidate_text": result.candidate_text,
        "uncaught_count": result.uncaught_count,
        "total_matched": result.total_matched,
        "matches": matches,
    }


def series_view(series: TimeSeries) -> dict:
    return {
        "key": series.key,
        "label": series.label,
        "total": series.total,
        "buckets": [{"day": day, "count": count} for day, count in series.buckets],
    }


def comment_row_view(row: CommentRow) -> dict:
    return {
        "comment": comment_view(row.comment),
        "caught_by": row.caught_by,
        "phrase_spans": row.phrase_spans,
    }


def comment_page_view(page: CommentPage) -> dict:
    return {
        "items": [comment_row_view(r) for r in page.items],
        "total": page.total,
        "page": page.page,
        "page_size": page.page_size,
    }


def poll_outcome_view(outcome: PollOutcome) -> dict:
    return outcome.as_dict()


def event_view(event: MatchEvent) -> dict:
    return {
        "event_id": event.event_id,
        "comment_id": event.comment_id,
        "phrase_id": event.phrase_id,
        "category_id": event.category_id,
        "spans": [list(s) for s in event.spans],
        "matched_at": iso(event.matched_at),
        "action_taken": event.action_taken.value,
        "action_status": event.action_status.value,
        "fail_reason": event.fail_reason,
    }
