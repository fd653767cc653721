"""Comment ingestion: backfill, periodic polling, action execution.

Backfill pulls the full history without executing anything. Polls fetch
page by page; each page's comments, their match events, and the cursor
advance commit in one transaction, then actions run against the platform
and event statuses flip to applied. A poll interrupted anywhere can be
rerun: comment and event inserts are idempotent, and still-pending
actions are re-driven by the recovery pass at the start of the next poll
(platform actions are idempotent, so a crash between the action call and
the status commit cannot double-apply).

Retroactive scans (rescan) record audit events for historical comments
but never execute actions.
"""

from __future__ import annotations

import logging
import threading
import time

from .connector import ActionRejected, Connector, parse_timestamp
from .errors import BadInterval, ConnectorUnavailable, ValidationError
from .models import (
    ActionStatus,
    CommentRecord,
    CommentStatus,
    MatchAction,
    MatchEvent,
    PollOutcome,
    status_rank,
)
from .scanning import ConfigSnapshot, load_config
from .store import Store

logger = logging.getLogger(__name__)

PAGE_SIZE = 100


class BackfillRequired(ValidationError):
    code = "BackfillRequired"


def _no_kill(point: str) -> None:
    return None


_locks_guard = threading.Lock()


def _owner_lock(store: Store, owner_id: str) -> threading.Lock:
    key = ("ingest_lock", owner_id)
    with _locks_guard:
        lock = store.cache.get(key)
        if lock is None:
            lock = threading.Lock()
            store.cache[key] = lock
    return lock


def _record_from(raw: dict, owner_id: str, channel_id: str, fetched_at: float) -> CommentRecord:
    return CommentRecord(
        comment_id=str(raw["comment_id"]),
        owner_id=owner_id,
        channel_id=channel_id or str(raw.get("channel_id", "")),
        video_id=str(raw.get("video_id", "")),
        author_id=str(raw.get("author_id", "")),
        author_name=str(raw.get("author_name", "")),
        text=str(raw.get("text", "")),
        published_at=parse_timestamp(raw.get("published_at", 0.0)),
        fetched_at=fetched_at,
    )


def backfill(store: Store, owner_id: str, connector: Connector, page_size: int = PAGE_SIZE) -> int:
    """Retrieve the full comment history; never executes actions.

    Idempotent on comment id; on connector failure the pages fetched so
    far stay persisted and a retry resumes from the stored cursor.
    """
    lock = _owner_lock(store, owner_id)
    with lock:
        cursor_row = store.get_cursor(owner_id)
        cursor = cursor_row.position if cursor_row else None
        ingested = 0
        while True:
            comments, next_cursor, channel_id = connector.list_comments(cursor, page_size)
            if not comments:
                with store.write():
                    store.set_cursor(owner_id, next_cursor, channel_id)
                break
            with store.write():
                new_in_page = 0
                for raw in comments:
                    if store.upsert_comment(_record_from(raw, owner_id, channel_id, store.clock())):
                        new_in_page += 1
                if new_in_page:
                    store.bump_corpus_generation(owner_id)
                store.set_cursor(owner_id, next_cursor, channel_id)
            ingested += new_in_page
            cursor = next_cursor
        return ingested


def _comment_level_action(actions: list[MatchAction]) -> CommentStatus | None:
    if MatchAction.DELETE in actions:
        return CommentStatus.DELETED
    if MatchAction.REVIEW in actions:
        return CommentStatus.HELD
    return None


def _enforce_comment(
    store: Store,
    owner_id: str,
    connector: Connector,
    comment_id: str,
    pending: list[MatchEvent],
    kill,
    outcome: PollOutcome,
) -> None:
    """Execute the strongest pending action for one comment and settle
    the event statuses. Transient connector failures leave events
    pending for the next poll's recovery pass."""
    comment = store.get_comment(comment_id)
    if comment is None:
        return
    actions = [e.action_taken for e in pending]
    want_block = MatchAction.BLOCK in actions and not comment.author_blocked
    target = _comment_level_action(actions)

    kill("before_action")
    try:
        if want_block:
            connector.block_user(comment.author_id)
            outcome.actions_applied += 1
            kill("mid_action")
        if target is not None and status_rank(comment.status) < status_rank(target):
            if target is CommentStatus.DELETED:
                connector.delete_comment(comment_id)
            else:
                connector.hold_comment(comment_id)
            outcome.actions_applied += 1
    except ConnectorUnavailable as exc:
        logger.warning("connector unavailable while acting on %s: %s", comment_id, exc)
        return
    except ActionRejected as exc:
        with store.write():
            for event in pending:
                store.set_event_status(event.event_id, ActionStatus.FAILED, str(exc))
        return

    kill("after_action")
    with store.write():
        kill("status_txn")
        if want_block:
            store.set_author_blocked(owner_id, comment.author_id)
        if target is not None and status_rank(comment.status) < status_rank(target):
            store.set_comment_status(comment_id, target)
        for event in pending:
            store.set_event_status(event.event_id, ActionStatus.APPLIED)
    kill("after_status")


def _recover_pending(store: Store, owner_id: str, connector: Connector, kill, outcome: PollOutcome) -> None:
    by_comment: dict[str, list[MatchEvent]] = {}
    for event in store.pending_events(owner_id):
        by_comment.setdefault(event.comment_id, []).append(event)
    for comment_id, pending in by_comment.items():
        _enforce_comment(store, owner_id, connector, comment_id, pending, kill, outcome)


def poll_once(
    store: Store,
    owner_id: str,
    connector: Connector,
    page_size: int = PAGE_SIZE,
    kill=None,
    skip_if_busy: bool = False,
) -> PollOutcome | None:
    """Fetch comments past the cursor, scan them against the current
    configuration, record events, and execute the strongest action per
    comment. Returns None when skip_if_busy and a poll is running."""
    kill = kill or _no_kill
    lock = _owner_lock(store, owner_id)
    if skip_if_busy:
        if not lock.acquire(blocking=False):
            return None
    else:
        lock.acquire()
    try:
        cursor_row = store.get_cursor(owner_id)
        if cursor_row is None:
            raise BackfillRequired("run backfill before polling")
        outcome = PollOutcome()

        kill("recover")
        _recover_pending(store, owner_id, connector, kill, outcome)

        config: ConfigSnapshot = load_config(store, owner_id)
        cursor = store.get_cursor(owner_id).position
        while True:
            kill("fetch")
            comments, next_cursor, channel_id = connector.list_comments(cursor, page_size)
            if not comments:
                with store.write():
                    store.set_cursor(owner_id, next_cursor, channel_id)
                break

            page_pending: dict[str, list[MatchEvent]] = {}
            with store.write():
                kill("page_txn_begin")
                generation = store.next_scan_generation(owner_id)
                new_in_page = 0
                for raw in comments:
                    record = _record_from(raw, owner_id, channel_id, store.clock())
                    if not store.upsert_comment(record):
                        continue  # crash-rerun refetch of an already-persisted comment
                    new_in_page += 1
                    pending_here: list[MatchEvent] = []
                    for entry, spans in config.match_comment(record.text):
                        for category_id in entry.category_ids:
                            status = (
                                ActionStatus.APPLIED
                                if entry.phrase.action is MatchAction.MONITOR
                                else ActionStatus.PENDING
                            )
                            event = MatchEvent(
                                event_id=store.next_id("event"),
                                owner_id=owner_id,
                                comment_id=record.comment_id,
                                phrase_id=entry.phrase.phrase_id,
                                category_id=category_id,
                                spans=spans,
                                matched_at=store.clock(),
                                action_taken=entry.phrase.action,
                                action_status=status,
                                scan_generation=generation,
                            )
                            if store.insert_event(event):
                                outcome.events_created += 1
                                if status is ActionStatus.PENDING:
                                    pending_here.append(event)
                    if pending_here:
                        page_pending[record.comment_id] = pending_here
                if new_in_page:
                    store.bump_corpus_generation(owner_id)
                store.set_cursor(owner_id, next_cursor, channel_id)
                kill("page_txn_end")
            outcome.new_comments += new_in_page

            kill("after_page")
            for comment_id, pending in page_pending.items():
                _enforce_comment(store, owner_id, connector, comment_id, pending, kill, outcome)
            cursor = next_cursor
        return outcome
    finally:
        lock.release()


def rescan(store: Store, owner_id: str) -> int:
    """Record audit events for historical comments against the current
    configuration. Never executes actions (no retroactive enforcement);
    existing (comment, phrase, category) events are left untouched."""
    lock = _owner_lock(store, owner_id)
    with lock:
        config = load_config(store, owner_id)
        created = 0
        with store.write():
            generation = store.next_scan_generation(owner_id)
            for comment in store.comments_for_owner(owner_id):
                for entry, spans in config.match_comment(comment.text):
                    for category_id in entry.category_ids:
                        event = MatchEvent(
                            event_id=store.next_id("event"),
                            owner_id=owner_id,
                            comment_id=comment.comment_id,
                            phrase_id=entry.phrase.phrase_id,
                            category_id=category_id,
                            spans=spans,
                            matched_at=store.clock(),
                            action_taken=entry.phrase.action,
                            action_status=ActionStatus.SKIPPED,
                            scan_generation=generation,
                        )
                        if store.insert_event(event):
                            created += 1
        return created


class Poller:
    """Invokes poll_once at a fixed interval on a background thread.

    Ticks that would overlap a still-running poll are skipped; stop()
    drains the in-flight poll before returning.
    """

    def __init__(
        self,
        store: Store,
        owner_id: str,
        connector: Connector,
        interval: float,
        monotonic=time.monotonic,
        wait=None,
    ):
        if interval < 1:
            raise BadInterval(f"poll interval must be >= 1 second, got {interval}")
        self.store = store
        self.owner_id = owner_id
        self.connector = connector
        self.interval = interval
        self._monotonic = monotonic
        self._stop = threading.Event()
        self._wait = wait if wait is not None else self._stop.wait
        self._thread: threading.Thread | None = None

    def poll_tick(self) -> PollOutcome | None:
        try:
            return poll_once(self.store, self.owner_id, self.connector, skip_if_busy=True)
        except ConnectorUnavailable as exc:
            logger.warning("poll skipped, connector unavailable: %s", exc)
        except Exception:
            logger.exception("poll failed")
        return None

    def _run(self) -> None:
        while not self._stop.is_set():
            started = self._monotonic()
            self.poll_tick()
            elapsed = self._monotonic() - started
            if self._wait(max(0.0, self.interval - elapsed)):
                break

    def start(self) -> "Poller":
        self._thread = threading.Thread(target=self._run, name=f"poller-{self.owner_id}", daemon=True)
        self._thread.start()
        return self

    def stop(self, timeout: float = 30.0) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=timeout)
            self._thread = None
