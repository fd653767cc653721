"""Audit analytics: daily time series and the comment attribution table.

Series cover a trailing 30-day window in the channel's timezone. A
comment counts once per category (or phrase) on the day of its first
in-window match, so a single comment hit by several phrases of one
category cannot inflate that category's chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timedelta
from zoneinfo import ZoneInfo

from .errors import BadPage, CategoryNotFound, OwnerNotFound
from .models import CommentRecord, MatchEvent, TimeSeries, status_rank
from .store import Store

WINDOW_DAYS = 30

SORT_KEYS = ("recency", "author", "status")


def _tz(store: Store, owner_id: str) -> ZoneInfo:
    owner = store.get_owner(owner_id)
    if owner is None:
        raise OwnerNotFound(owner_id)
    return ZoneInfo(owner.timezone)


def _day(ts: float, tz: ZoneInfo) -> date:
    return datetime.fromtimestamp(ts, tz).date()


def window_dates(window_end: date) -> list[date]:
    start = window_end - timedelta(days=WINDOW_DAYS - 1)
    return [start + timedelta(days=i) for i in range(WINDOW_DAYS)]


def default_window_end(store: Store, owner_id: str) -> date:
    return _day(store.clock(), _tz(store, owner_id))


def _first_day_per_key(
    events: list[MatchEvent], key_of, days: list[date], tz: ZoneInfo
) -> dict[tuple[str, str], date]:
    """Earliest in-window match day per (key, comment)."""
    in_window = set(days)
    first: dict[tuple[str, str], date] = {}
    for event in events:
        day = _day(event.matched_at, tz)
        if day not in in_window:
            continue
        key = key_of(event)
        if key is None:
            continue
        pair = (key, event.comment_id)
        if pair not in first or day < first[pair]:
            first[pair] = day
    return first


def _bucketize(first: dict[tuple[str, str], date], key: str, days: list[date]) -> list[tuple[str, int]]:
    counts = {d: 0 for d in days}
    for (k, _comment), day in first.items():
        if k == key:
            counts[day] += 1
    return [(d.isoformat(), counts[d]) for d in days]


def category_series(store: Store, owner_id: str, window_end: date | None = None) -> list[TimeSeries]:
    """One 30-bucket series per category, counting distinct comments."""
    tz = _tz(store, owner_id)
    with store.snapshot():
        if window_end is None:
            window_end = _day(store.clock(), tz)
        days = window_dates(window_end)
        categories = store.list_categories(owner_id)
        events = store.events_for_owner(owner_id)
        first = _first_day_per_key(events, lambda e: e.category_id, days, tz)
        return [
            TimeSeries(
                key=c.category_id,
                label=c.name,
                buckets=_bucketize(first, c.category_id, days),
            )
            for c in sorted(categories, key=lambda c: c.name)
        ]


def phrase_series(
    store: Store, owner_id: str, category_id: str, window_end: date | None = None
) -> list[TimeSeries]:
    """Per-phrase series for one category, ordered most-caught first
    (ties broken by phrase text)."""
    tz = _tz(store, owner_id)
    with store.snapshot():
        category = store.get_category(category_id)
        if category is None or category.owner_id != owner_id:
            raise CategoryNotFound(f"no category {category_id} for this owner")
        if window_end is None:
            window_end = _day(store.clock(), tz)
        days = window_dates(window_end)
        events = [e for e in store.events_for_owner(owner_id) if e.category_id == category_id]
        first = _first_day_per_key(events, lambda e: e.phrase_id, days, tz)
        series = []
        for pid in category.phrase_refs:
            phrase = store.get_phrase(pid)
            series.append(
                TimeSeries(key=pid, label=phrase.text, buckets=_bucketize(first, pid, days))
            )
        series.sort(key=lambda s: (-s.total, s.label))
        return series


@dataclass
class CommentRow:
    comment: CommentRecord
    caught_by: list[str]  # category names, every matching category
    phrase_spans: list[dict]  # per-phrase spans for highlighting


@dataclass
class CommentPage:
    items: list[CommentRow]
    total: int
    page: int
    page_size: int


def comment_table(
    store: Store,
    owner_id: str,
    search_text: str | None = None,
    category_id: str | None = None,
    sort: str = "recency",
    page: int = 1,
    page_size: int = 50,
) -> CommentPage:
    """Paginated, attributable view over all stored comments."""
    if not (1 <= page_size <= 200):
        raise BadPage(f"page_size must be in [1, 200], got {page_size}")
    if page < 1:
        raise BadPage(f"page must be >= 1, got {page}")
    if sort not in SORT_KEYS:
        raise BadPage(f"sort must be one of {SORT_KEYS}, got {sort!r}")

    with store.snapshot():
        comments = store.comments_for_owner(owner_id, newest_first=True)
        events = store.events_for_owner(owner_id)
        categories = {c.category_id: c for c in store.list_categories(owner_id)}
        by_comment: dict[str, list[MatchEvent]] = {}
        for event in events:
            by_comment.setdefault(event.comment_id, []).append(event)

        if search_text:
            needle = search_text.casefold()
            comments = [c for c in comments if needle in c.text.casefold()]
        if category_id is not None:
            comments = [
                c
                for c in comments
                if any(e.category_id == category_id for e in by_comment.get(c.comment_id, ()))
            ]

        if sort == "recency":
            comments.sort(key=lambda c: (-c.published_at, c.comment_id))
        elif sort == "author":
            comments.sort(key=lambda c: (c.author_name, -c.published_at, c.comment_id))
        else:
            comments.sort(key=lambda c: (status_rank(c.status), -c.published_at, c.comment_id))

        total = len(comments)
        window = comments[(page - 1) * page_size : page * page_size]

        items = []
        for comment in window:
            comment_events = by_comment.get(comment.comment_id, [])
            names = sorted(
                {
                    categories[e.category_id].name
                    for e in comment_events
                    if e.category_id in categories
                }
            )
            spans_by_phrase: dict[str, dict] = {}
            for event in comment_events:
                phrase = store.get_phrase(event.phrase_id)
                if phrase is None:
                    continue
                spans_by_phrase.setdefault(
                    event.phrase_id,
                    {
                        "phrase_id": event.phrase_id,
                        "text": phrase.text,
                        "spans": [list(s) for s in event.spans],
                    },
                )
            items.append(
                CommentRow(
                    comment=comment,
                    caught_by=names,
                    phrase_spans=sorted(spans_by_phrase.values(), key=lambda d: d["text"]),
                )
            )
        return CommentPage(items=items, total=total, page=page, page_size=page_size)
