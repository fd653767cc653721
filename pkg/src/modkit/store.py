"""Durable persistence for owners, phrases, categories, comments, events.

A single SQLite file holds everything. Writes are serialized behind one
lock (which trivially satisfies the single-writer-per-owner rule);
readers run on per-thread connections and can pin a consistent snapshot
while the writer keeps going (WAL mode). IDs are store-scoped counters,
so two stores replaying the same operation sequence mint identical ids.
"""

from __future__ import annotations

import contextlib
import json
import sqlite3
import threading
import time

from .errors import CorruptStore, VersionTooNew
from .models import (
    ActionStatus,
    BuiltinCategory,
    BuiltinRule,
    Category,
    CommentRecord,
    CommentStatus,
    ConnectorCursor,
    MatchAction,
    MatchEvent,
    MatchSpan,
    Owner,
    Phrase,
    PhraseOptions,
    Provenance,
    ProvenanceKind,
)

SCHEMA_VERSION = 1

_SCHEMA_V1 = """
CREATE TABLE meta (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
CREATE TABLE counters (
    name TEXT PRIMARY KEY,
    value INTEGER NOT NULL
);
CREATE TABLE owners (
    owner_id TEXT PRIMARY KEY,
    name TEXT NOT NULL UNIQUE,
    timezone TEXT NOT NULL DEFAULT 'UTC',
    config_generation INTEGER NOT NULL DEFAULT 0,
    corpus_generation INTEGER NOT NULL DEFAULT 0,
    scan_generation INTEGER NOT NULL DEFAULT 0,
    created_at REAL NOT NULL
);
CREATE TABLE phrases (
    phrase_id TEXT PRIMARY KEY,
    owner_id TEXT NOT NULL,
    text TEXT NOT NULL,
    case_sensitive INTEGER NOT NULL,
    spell_variants INTEGER NOT NULL,
    leet_variants INTEGER NOT NULL,
    action TEXT NOT NULL,
    created_at REAL NOT NULL,
    UNIQUE (owner_id, text)
);
CREATE TABLE categories (
    category_id TEXT PRIMARY KEY,
    owner_id TEXT NOT NULL,
    name TEXT NOT NULL,
    provenance_kind TEXT NOT NULL,
    source_user_id TEXT,
    source_id TEXT,
    snapshot_version INTEGER,
    snapshot_texts TEXT,
    shared INTEGER NOT NULL DEFAULT 0,
    version INTEGER NOT NULL DEFAULT 1,
    created_at REAL NOT NULL,
    UNIQUE (owner_id, name)
);
CREATE TABLE category_phrases (
    category_id TEXT NOT NULL,
    phrase_id TEXT NOT NULL,
    position INTEGER NOT NULL,
    PRIMARY KEY (category_id, phrase_id)
);
CREATE TABLE builtins (
    builtin_id TEXT PRIMARY KEY,
    name TEXT NOT NULL UNIQUE,
    description TEXT NOT NULL,
    authors TEXT NOT NULL,
    rules_json TEXT NOT NULL,
    example_rules_json TEXT NOT NULL,
    import_count INTEGER NOT NULL DEFAULT 0,
    version INTEGER NOT NULL DEFAULT 1
);
CREATE TABLE comments (
    comment_id TEXT PRIMARY KEY,
    owner_id TEXT NOT NULL,
    channel_id TEXT NOT NULL,
    video_id TEXT NOT NULL,
    author_id TEXT NOT NULL,
    author_name TEXT NOT NULL,
    text TEXT NOT NULL,
    published_at REAL NOT NULL,
    fetched_at REAL NOT NULL,
    status TEXT NOT NULL DEFAULT 'visible',
    author_blocked INTEGER NOT NULL DEFAULT 0
);
CREATE INDEX idx_comments_owner ON comments(owner_id, published_at DESC, comment_id DESC);
CREATE TABLE events (
    event_id TEXT PRIMARY KEY,
    owner_id TEXT NOT NULL,
    comment_id TEXT NOT NULL,
    phrase_id TEXT NOT NULL,
    category_id TEXT NOT NULL,
    spans_json TEXT NOT NULL,
    matched_at REAL NOT NULL,
    action_taken TEXT NOT NULL,
    action_status TEXT NOT NULL,
    fail_reason TEXT,
    scan_generation INTEGER NOT NULL DEFAULT 0,
    UNIQUE (comment_id, phrase_id, category_id)
);
CREATE INDEX idx_events_owner ON events(owner_id, matched_at);
CREATE INDEX idx_events_comment ON events(comment_id);
CREATE TABLE cursors (
    owner_id TEXT PRIMARY KEY,
    channel_id TEXT NOT NULL DEFAULT '',
    position TEXT,
    last_poll_at REAL
);
CREATE TABLE tokens (
    token TEXT PRIMARY KEY,
    owner_id TEXT NOT NULL,
    expires_at REAL NOT NULL
);
"""


def _apply_v1(conn: sqlite3.Connection) -> None:
    # executescript() would commit the migration transaction; run each
    # statement individually instead.
    for statement in _SCHEMA_V1.split(";"):
        if statement.strip():
            conn.execute(statement)


_MIGRATIONS = {1: _apply_v1}  # target version -> migration from the previous one


class Store:
    """Handle to one store file. Open with :func:`open_store`."""

    def __init__(self, path: str, clock=None):
        self.path = str(path)
        self.clock = clock or time.time
        self._single_conn = self.path == ":memory:"
        self._writer: sqlite3.Connection | None = None
        self._lock = threading.RLock()
        self._local = threading.local()
        # scratch space for derived-data caches (e.g. preview's caught set)
        self.cache: dict = {}

    @property
    def _txn_depth(self) -> int:
        return getattr(self._local, "txn_depth", 0)

    @_txn_depth.setter
    def _txn_depth(self, value: int) -> None:
        self._local.txn_depth = value

    # -- lifecycle -----------------------------------------------------

    def open(self) -> "Store":
        self._writer = self._connect()
        self._check_and_migrate()
        return self

    def close(self) -> None:
        if self._writer is not None:
            self._writer.close()
            self._writer = None
        conn = getattr(self._local, "read_conn", None)
        if conn is not None:
            conn.close()
            self._local.read_conn = None

    def _connect(self) -> sqlite3.Connection:
        try:
            conn = sqlite3.connect(self.path, check_same_thread=False, timeout=30.0)
        except sqlite3.Error as exc:
            raise CorruptStore(str(exc)) from exc
        conn.row_factory = sqlite3.Row
        conn.isolation_level = None  # manual transaction control
        if not self._single_conn:
            conn.execute("PRAGMA journal_mode=WAL")
        conn.execute("PRAGMA foreign_keys=OFF")
        return conn

    def _check_and_migrate(self) -> None:
        conn = self._writer
        try:
            has_meta = conn.execute(
                "SELECT 1 FROM sqlite_master WHERE type='table' AND name='meta'"
            ).fetchone()
        except sqlite3.DatabaseError as exc:
            raise CorruptStore(str(exc)) from exc
        version = 0
        if has_meta:
            row = conn.execute("SELECT value FROM meta WHERE key='schema_version'").fetchone()
            if row is None:
                raise CorruptStore("meta table has no schema_version")
            version = int(row["value"])
        if version > SCHEMA_VERSION:
            raise VersionTooNew(f"store is at schema v{version}, this build supports v{SCHEMA_VERSION}")
        while version < SCHEMA_VERSION:
            version += 1
            conn.execute("BEGIN IMMEDIATE")
            try:
                _MIGRATIONS[version](conn)
                conn.execute(
                    "INSERT INTO meta(key, value) VALUES('schema_version', ?) "
                    "ON CONFLICT(key) DO UPDATE SET value=excluded.value",
                    (str(version),),
                )
                conn.execute("COMMIT")
            except Exception:
                conn.execute("ROLLBACK")
                raise

    # -- connection routing --------------------------------------------

    def _read_conn(self) -> sqlite3.Connection:
        if self._single_conn or self._txn_depth > 0:
            return self._writer
        snap = getattr(self._local, "snapshot_conn", None)
        if snap is not None:
            return snap
        conn = getattr(self._local, "read_conn", None)
        if conn is None:
            conn = self._connect()
            self._local.read_conn = conn
        return conn

    @contextlib.contextmanager
    def write(self):
        """Serialized write transaction; rolls back on any exception."""
        with self._lock:
            self._txn_depth += 1
            if self._txn_depth == 1:
                self._writer.execute("BEGIN IMMEDIATE")
            try:
                yield self
            except Exception:
                self._txn_depth -= 1
                if self._txn_depth == 0:
                    self._writer.execute("ROLLBACK")
                raise
            else:
                self._txn_depth -= 1
                if self._txn_depth == 0:
                    self._writer.execute("COMMIT")

    @contextlib.contextmanager
    def snapshot(self):
        """Consistent read view; concurrent writes become visible only after exit."""
        if self._single_conn:
            yield self
            return
        conn = self._read_conn()
        conn.execute("BEGIN")
        conn.execute("SELECT count(*) FROM meta")  # pin the read snapshot
        self._local.snapshot_conn = conn
        try:
            yield self
        finally:
            self._local.snapshot_conn = None
            conn.execute("COMMIT")

    def _execute(self, sql: str, params=()):
        return self._writer.execute(sql, params)

    def next_id(self, kind: str) -> str:
        row = self._execute(
            "INSERT INTO counters(name, value) VALUES(?, 1) "
            "ON CONFLICT(name) DO UPDATE SET value = value + 1 RETURNING value",
            (kind,),
        ).fetchone()
        prefix = {"owner": "u", "phrase": "p", "category": "c", "event": "ev", "token": "tok"}[kind]
        return f"{prefix}{row['value']:07d}"

    # -- owners ----------------------------------------------------------

    def ensure_owner(self, name: str, timezone: str = "UTC") -> Owner:
        with self.write():
            row = self._execute("SELECT * FROM owners WHERE name=?", (name,)).fetchone()
            if row is not None:
                return _owner(row)
            owner_id = self.next_id("owner")
            self._execute(
                "INSERT INTO owners(owner_id, name, timezone, created_at) VALUES(?,?,?,?)",
                (owner_id, name, timezone, self.clock()),
            )
            return Owner(owner_id=owner_id, name=name, timezone=timezone)

    def get_owner(self, owner_id: str) -> Owner | None:
        row = self._read_conn().execute("SELECT * FROM owners WHERE owner_id=?", (owner_id,)).fetchone()
        return _owner(row) if row else None

    def owner_by_name(self, name: str) -> Owner | None:
        row = self._read_conn().execute("SELECT * FROM owners WHERE name=?", (name,)).fetchone()
        return _owner(row) if row else None

    def set_timezone(self, owner_id: str, timezone: str) -> None:
        self._execute("UPDATE owners SET timezone=? WHERE owner_id=?", (timezone, owner_id))

    def bump_config_generation(self, owner_id: str) -> None:
        self._execute(
            "UPDATE owners SET config_generation = config_generation + 1 WHERE owner_id=?",
            (owner_id,),
        )

    def bump_corpus_generation(self, owner_id: str) -> None:
        self._execute(
            "UPDATE owners SET corpus_generation = corpus_generation + 1 WHERE owner_id=?",
            (owner_id,),
        )

    def next_scan_generation(self, owner_id: str) -> int:
        row = self._execute(
            "UPDATE owners SET scan_generation = scan_generation + 1 WHERE owner_id=? "
            "RETURNING scan_generation",
            (owner_id,),
        ).fetchone()
        return int(row["scan_generation"])

    # -- phrases ---------------------------------------------------------

    def insert_phrase(self, owner_id: str, text: str, options: PhraseOptions, action: MatchAction) -> Phrase:
        phrase_id = self.next_id("phrase")
        self._execute(
            "INSERT INTO phrases(phrase_id, owner_id, text, case_sensitive, spell_variants,"
            " leet_variants, action, created_at) VALUES(?,?,?,?,?,?,?,?)",
            (
                phrase_id,
                owner_id,
                text,
                int(options.case_sensitive),
                int(options.spell_variants),
                int(options.leet_variants),
                action.value,
                self.clock(),
            ),
        )
        return Phrase(phrase_id=phrase_id, owner_id=owner_id, text=text, options=options, action=action)

    def get_phrase(self, phrase_id: str) -> Phrase | None:
        row = self._read_conn().execute("SELECT * FROM phrases WHERE phrase_id=?", (phrase_id,)).fetchone()
        return _phrase(row) if row else None

    def phrase_by_text(self, owner_id: str, text: str) -> Phrase | None:
        row = self._read_conn().execute(
            "SELECT * FROM phrases WHERE owner_id=? AND text=?", (owner_id, text)
        ).fetchone()
        return _phrase(row) if row else None

    def update_phrase(self, phrase_id: str, options: PhraseOptions, action: MatchAction) -> None:
        self._execute(
            "UPDATE phrases SET case_sensitive=?, spell_variants=?, leet_variants=?, action=?"
            " WHERE phrase_id=?",
            (
                int(options.case_sensitive),
                int(options.spell_variants),
                int(options.leet_variants),
                action.value,
                phrase_id,
            ),
        )

    def delete_phrase(self, phrase_id: str) -> None:
        self._execute("DELETE FROM events WHERE phrase_id=?", (phrase_id,))
        self._execute("DELETE FROM category_phrases WHERE phrase_id=?", (phrase_id,))
        self._execute("DELETE FROM phrases WHERE phrase_id=?", (phrase_id,))

    def phrase_link_count(self, phrase_id: str) -> int:
        row = self._read_conn().execute(
            "SELECT count(*) AS n FROM category_phrases WHERE phrase_id=?", (phrase_id,)
        ).fetchone()
        return int(row["n"])

    def configured_phrases(self, owner_id: str) -> list[tuple[Phrase, list[str]]]:
        """Phrases linked to at least one category, with their category ids."""
        rows = self._read_conn().execute(
            "SELECT p.*, cp.category_id FROM phrases p"
            " JOIN category_phrases cp ON cp.phrase_id = p.phrase_id"
            " WHERE p.owner_id=? ORDER BY p.phrase_id, cp.category_id",
            (owner_id,),
        ).fetchall()
        grouped: dict[str, tuple[Phrase, list[str]]] = {}
        for row in rows:
            entry = grouped.get(row["phrase_id"])
            if entry is None:
                grouped[row["phrase_id"]] = (_phrase(row), [row["category_id"]])
            else:
                entry[1].append(row["category_id"])
        return list(grouped.values())

    # -- categories -------------------------------------------------------

    def insert_category(
        self,
        owner_id: str,
        name: str,
        provenance: Provenance,
        snapshot_texts: list[str] | None = None,
        shared: bool = False,
    ) -> Category:
        category_id = self.next_id("category")
        created_at = self.clock()
        self._execute(
            "INSERT INTO categories(category_id, owner_id, name, provenance_kind, source_user_id,"
            " source_id, snapshot_version, snapshot_texts, shared, version, created_at)"
            " VALUES(?,?,?,?,?,?,?,?,?,1,?)",
            (
                category_id,
                owner_id,
                name,
                provenance.kind.value,
                provenance.source_user_id,
                provenance.source_id,
                provenance.snapshot_version,
                json.dumps(snapshot_texts) if snapshot_texts is not None else None,
                int(shared),
                created_at,
            ),
        )
        return Category(
            category_id=category_id,
            owner_id=owner_id,
            name=name,
            phrase_refs=[],
            provenance=provenance,
            created_at=created_at,
            shared=shared,
        )

    def get_category(self, category_id: str) -> Category | None:
        row = self._read_conn().execute(
            "SELECT * FROM categories WHERE category_id=?", (category_id,)
        ).fetchone()
        if row is None:
            return None
        return self._category_with_refs(row)

    def _category_with_refs(self, row) -> Category:
        refs = [
            r["phrase_id"]
            for r in self._read_conn().execute(
                "SELECT phrase_id FROM category_phrases WHERE category_id=? ORDER BY position",
                (row["category_id"],),
            )
        ]
        return _category(row, refs)

    def category_by_name(self, owner_id: str, name: str) -> Category | None:
        row = self._read_conn().execute(
            "SELECT * FROM categories WHERE owner_id=? AND name=?", (owner_id, name)
        ).fetchone()
        return self._category_with_refs(row) if row else None

    def list_categories(self, owner_id: str) -> list[Category]:
        rows = self._read_conn().execute(
            "SELECT * FROM categories WHERE owner_id=? ORDER BY category_id", (owner_id,)
        ).fetchall()
        return [self._category_with_refs(r) for r in rows]

    def set_shared(self, category_id: str, shared: bool) -> None:
        self._execute("UPDATE categories SET shared=? WHERE category_id=?", (int(shared), category_id))

    def rename_category(self, category_id: str, name: str) -> None:
        self._execute("UPDATE categories SET name=? WHERE category_id=?", (name, category_id))

    def bump_category_version(self, category_id: str) -> None:
        self._execute(
            "UPDATE categories SET version = version + 1 WHERE category_id=?", (category_id,)
        )

    def delete_category(self, category_id: str) -> None:
        phrase_ids = [
            r["phrase_id"]
            for r in self._execute(
                "SELECT phrase_id FROM category_phrases WHERE category_id=?", (category_id,)
            )
        ]
        self._execute("DELETE FROM events WHERE category_id=?", (category_id,))
        self._execute("DELETE FROM category_phrases WHERE category_id=?", (category_id,))
        for pid in phrase_ids:
            if self.phrase_link_count(pid) == 0:
                self.delete_phrase(pid)
        self._execute("DELETE FROM categories WHERE category_id=?", (category_id,))

    def link_phrase(self, category_id: str, phrase_id: str) -> None:
        row = self._execute(
            "SELECT coalesce(max(position), -1) AS p FROM category_phrases WHERE category_id=?",
            (category_id,),
        ).fetchone()
        self._execute(
            "INSERT INTO category_phrases(category_id, phrase_id, position) VALUES(?,?,?)",
            (category_id, phrase_id, int(row["p"]) + 1),
        )

    def unlink_phrase(self, category_id: str, phrase_id: str) -> bool:
        cur = self._execute(
            "DELETE FROM category_phrases WHERE category_id=? AND phrase_id=?",
            (category_id, phrase_id),
        )
        return cur.rowcount > 0

    def is_linked(self, category_id: str, phrase_id: str) -> bool:
        row = self._read_conn().execute(
            "SELECT 1 FROM category_phrases WHERE category_id=? AND phrase_id=?",
            (category_id, phrase_id),
        ).fetchone()
        return row is not None

    def categories_referencing(self, phrase_id: str) -> list[str]:
        return [
            r["category_id"]
            for r in self._read_conn().execute(
                "SELECT category_id FROM category_phrases WHERE phrase_id=? ORDER BY category_id",
                (phrase_id,),
            )
        ]

    # -- builtins ----------------------------------------------------------

    def upsert_builtin(self, builtin: BuiltinCategory) -> None:
        self._execute(
            "INSERT INTO builtins(builtin_id, name, description, authors, rules_json,"
            " example_rules_json, import_count, version) VALUES(?,?,?,?,?,?,?,?)"
            " ON CONFLICT(builtin_id) DO UPDATE SET name=excluded.name,"
            " description=excluded.description, authors=excluded.authors,"
            " rules_json=excluded.rules_json, example_rules_json=excluded.example_rules_json",
            (
                builtin.builtin_id,
                builtin.name,
                builtin.description,
                builtin.authors,
                _rules_to_json(builtin.rules),
                json.dumps(builtin.example_rules),
                builtin.import_count,
                builtin.version,
            ),
        )

    def get_builtin(self, builtin_id: str) -> BuiltinCategory | None:
        row = self._read_conn().execute(
            "SELECT * FROM builtins WHERE builtin_id=?", (builtin_id,)
        ).fetchone()
        return _builtin(row) if row else None

    def get_builtin_raw(self, builtin_id: str) -> bytes | None:
        """Canonical serialized form, for byte-identity checks."""
        row = self._read_conn().execute(
            "SELECT name, description, authors, rules_json, version FROM builtins WHERE builtin_id=?",
            (builtin_id,),
        ).fetchone()
        if row is None:
            return None
        return json.dumps(
            {
                "name": row["name"],
                "description": row["description"],
                "authors": row["authors"],
                "rules": json.loads(row["rules_json"]),
                "version": row["version"],
            },
            sort_keys=True,
        ).encode("utf-8")

    def list_builtins(self) -> list[BuiltinCategory]:
        rows = self._read_conn().execute("SELECT * FROM builtins ORDER BY builtin_id").fetchall()
        return [_builtin(r) for r in rows]

    def increment_import_count(self, builtin_id: str) -> None:
        self._execute(
            "UPDATE builtins SET import_count = import_count + 1 WHERE builtin_id=?", (builtin_id,)
        )

    def update_builtin_rules(self, builtin_id: str, rules: list[BuiltinRule]) -> None:
        self._execute(
            "UPDATE builtins SET rules_json=?, version = version + 1 WHERE builtin_id=?",
            (_rules_to_json(rules), builtin_id),
        )

    # -- comments ------------------------------------------------------------

    def upsert_comment(self, record: CommentRecord) -> bool:
        """Insert if new; returns True when the row was inserted."""
        cur = self._execute(
            "INSERT OR IGNORE INTO comments(comment_id, owner_id, channel_id, video_id,"
            " author_id, author_name, text, published_at, fetched_at, status, author_blocked)"
            " VALUES(?,?,?,?,?,?,?,?,?,?,?)",
            (
                record.comment_id,
                record.owner_id,
                record.channel_id,
                record.video_id,
                record.author_id,
                record.author_name,
                record.text,
                record.published_at,
                record.fetched_at,
                record.status.value,
                int(record.author_blocked),
            ),
        )
        return cur.rowcount > 0

    def get_comment(self, comment_id: str) -> CommentRecord | None:
        row = self._read_conn().execute(
            "SELECT * FROM comments WHERE comment_id=?", (comment_id,)
        ).fetchone()
        return _comment(row) if row else None

    def comments_for_owner(self, owner_id: str, newest_first: bool = True) -> list[CommentRecord]:
        order = "DESC" if newest_first else "ASC"
        rows = self._read_conn().execute(
            f"SELECT * FROM comments WHERE owner_id=? ORDER BY published_at {order}, comment_id {order}",
            (owner_id,),
        ).fetchall()
        return [_comment(r) for r in rows]

    def comment_count(self, owner_id: str) -> int:
        row = self._read_conn().execute(
            "SELECT count(*) AS n FROM comments WHERE owner_id=?", (owner_id,)
        ).fetchone()
        return int(row["n"])

    def set_comment_status(self, comment_id: str, status: CommentStatus) -> None:
        self._execute("UPDATE comments SET status=? WHERE comment_id=?", (status.value, comment_id))

    def set_author_blocked(self, owner_id: str, author_id: str) -> None:
        self._execute(
            "UPDATE comments SET author_blocked=1 WHERE owner_id=? AND author_id=?",
            (owner_id, author_id),
        )

    # -- events ----------------------------------------------------------------

    def insert_event(self, event: MatchEvent) -> bool:
        """Insert unless the (comment, phrase, category) triple already exists."""
        cur = self._execute(
            "INSERT OR IGNORE INTO events(event_id, owner_id, comment_id, phrase_id, category_id,"
            " spans_json, matched_at, action_taken, action_status, fail_reason, scan_generation)"
            " VALUES(?,?,?,?,?,?,?,?,?,?,?)",
            (
                event.event_id,
                event.owner_id,
                event.comment_id,
                event.phrase_id,
                event.category_id,
                json.dumps([list(s) for s in event.spans]),
                event.matched_at,
                event.action_taken.value,
                event.action_status.value,
                event.fail_reason,
                event.scan_generation,
            ),
        )
        return cur.rowcount > 0

    def events_for_owner(self, owner_id: str) -> list[MatchEvent]:
        rows = self._read_conn().execute(
            "SELECT * FROM events WHERE owner_id=? ORDER BY event_id", (owner_id,)
        ).fetchall()
        return [_event(r) for r in rows]

    def events_for_comment(self, comment_id: str) -> list[MatchEvent]:
        rows = self._read_conn().execute(
            "SELECT * FROM events WHERE comment_id=? ORDER BY event_id", (comment_id,)
        ).fetchall()
        return [_event(r) for r in rows]

    def events_for_phrase(self, phrase_id: str) -> list[MatchEvent]:
        rows = self._read_conn().execute(
            "SELECT * FROM events WHERE phrase_id=? ORDER BY event_id", (phrase_id,)
        ).fetchall()
        return [_event(r) for r in rows]

    def pending_events(self, owner_id: str) -> list[MatchEvent]:
        rows = self._read_conn().execute(
            "SELECT * FROM events WHERE owner_id=? AND action_status='pending' ORDER BY event_id",
            (owner_id,),
        ).fetchall()
        return [_event(r) for r in rows]

    def set_event_status(
        self, event_id: str, status: ActionStatus, fail_reason: str | None = None
    ) -> None:
        self._execute(
            "UPDATE events SET action_status=?, fail_reason=? WHERE event_id=?",
            (status.value, fail_reason, event_id),
        )

    # -- cursors ------------------------------------------------------------------

    def get_cursor(self, owner_id: str) -> ConnectorCursor | None:
        row = self._read_conn().execute(
            "SELECT * FROM cursors WHERE owner_id=?", (owner_id,)
        ).fetchone()
        if row is None:
            return None
        return ConnectorCursor(
            owner_id=row["owner_id"],
            channel_id=row["channel_id"],
            position=row["position"],
            last_poll_at=row["last_poll_at"],
        )

    def set_cursor(self, owner_id: str, position: str | None, channel_id: str = "") -> None:
        self._execute(
            "INSERT INTO cursors(owner_id, channel_id, position, last_poll_at) VALUES(?,?,?,?)"
            " ON CONFLICT(owner_id) DO UPDATE SET position=excluded.position,"
            " channel_id=excluded.channel_id, last_poll_at=excluded.last_poll_at",
            (owner_id, channel_id, position, self.clock()),
        )

    # -- tokens ----------------------------------------------------------------------

    def insert_token(self, owner_id: str, ttl_seconds: float = 86400.0) -> tuple[str, float]:
        token = self.next_id("token")
        expires_at = self.clock() + ttl_seconds
        self._execute(
            "INSERT INTO tokens(token, owner_id, expires_at) VALUES(?,?,?)",
            (token, owner_id, expires_at),
        )
        return token, expires_at

    def resolve_token(self, token: str) -> str | None:
        row = self._read_conn().execute(
            "SELECT owner_id, expires_at FROM tokens WHERE token=?", (token,)
        ).fetchone()
        if row is None or row["expires_at"] <= self.clock():
            return None
        return row["owner_id"]


def open_store(path, clock=None) -> Store:
    return Store(path, clock=clock).open()


def integrity_violations(store: Store) -> list[str]:
    """Referential-integrity audit used by crash-consistency tests."""
    conn = store._read_conn()
    problems: list[str] = []
    for sql, label in [
        (
            "SELECT cp.category_id, cp.phrase_id FROM category_phrases cp"
            " LEFT JOIN categories c ON c.category_id = cp.category_id WHERE c.category_id IS NULL",
            "link to missing category",
        ),
        (
            "SELECT cp.category_id, cp.phrase_id FROM category_phrases cp"
            " LEFT JOIN phrases p ON p.phrase_id = cp.phrase_id WHERE p.phrase_id IS NULL",
            "link to missing phrase",
        ),
        (
            "SELECT p.phrase_id FROM phrases p"
            " LEFT JOIN category_phrases cp ON cp.phrase_id = p.phrase_id WHERE cp.phrase_id IS NULL",
            "orphan phrase",
        ),
        (
            "SELECT e.event_id FROM events e"
            " LEFT JOIN comments c ON c.comment_id = e.comment_id WHERE c.comment_id IS NULL",
            "event for missing comment",
        ),
        (
            "SELECT e.event_id FROM events e"
            " LEFT JOIN phrases p ON p.phrase_id = e.phrase_id WHERE p.phrase_id IS NULL",
            "event for missing phrase",
        ),
        (
            "SELECT e.event_id FROM events e"
            " LEFT JOIN categories c ON c.category_id = e.category_id WHERE c.category_id IS NULL",
            "event for missing category",
        ),
        (
            "SELECT comment_id FROM comments WHERE status NOT IN ('visible','held_for_review','deleted')",
            "invalid comment status",
        ),
        (
            "SELECT event_id FROM events WHERE action_status NOT IN ('pending','applied','failed','skipped')",
            "invalid event status",
        ),
    ]:
        for row in conn.execute(sql):
            problems.append(f"{label}: {tuple(row)}")
    return problems


# -- row mapping -----------------------------------------------------------


def _owner(row) -> Owner:
    return Owner(
        owner_id=row["owner_id"],
        name=row["name"],
        timezone=row["timezone"],
        config_generation=row["config_generation"],
        corpus_generation=row["corpus_generation"],
    )


def _options(row) -> PhraseOptions:
    return PhraseOptions(
        case_sensitive=bool(row["case_sensitive"]),
        spell_variants=bool(row["spell_variants"]),
        leet_variants=bool(row["leet_variants"]),
    )


def _phrase(row) -> Phrase:
    return Phrase(
        phrase_id=row["phrase_id"],
        owner_id=row["owner_id"],
        text=row["text"],
        options=_options(row),
        action=MatchAction(row["action"]),
    )


def _category(row, refs: list[str]) -> Category:
    return Category(
        category_id=row["category_id"],
        owner_id=row["owner_id"],
        name=row["name"],
        phrase_refs=refs,
        provenance=Provenance(
            kind=ProvenanceKind(row["provenance_kind"]),
            source_user_id=row["source_user_id"],
            source_id=row["source_id"],
            snapshot_version=row["snapshot_version"],
        ),
        created_at=row["created_at"],
        shared=bool(row["shared"]),
        version=row["version"],
    )


def snapshot_texts(store: Store, category_id: str) -> list[str] | None:
    row = store._read_conn().execute(
        "SELECT snapshot_texts FROM categories WHERE category_id=?", (category_id,)
    ).fetchone()
    if row is None or row["snapshot_texts"] is None:
        return None
    return json.loads(row["snapshot_texts"])


def _rules_to_json(rules: list[BuiltinRule]) -> str:
    return json.dumps(
        [
            {
                "text": r.text,
                "case_sensitive": r.options.case_sensitive,
                "spell_variants": r.options.spell_variants,
                "leet_variants": r.options.leet_variants,
                "action": r.action.value,
            }
            for r in rules
        ]
    )


def _rules_from_json(raw: str) -> list[BuiltinRule]:
    return [
        BuiltinRule(
            text=item["text"],
            options=PhraseOptions(
                case_sensitive=item["case_sensitive"],
                spell_variants=item["spell_variants"],
                leet_variants=item["leet_variants"],
            ),
            action=MatchAction(item["action"]),
        )
        for item in json.loads(raw)
    ]


def _builtin(row) -> BuiltinCategory:
    return BuiltinCategory(
        builtin_id=row["builtin_id"],
        name=row["name"],
        description=row["description"],
        authors=row["authors"],
        rules=_rules_from_json(row["rules_json"]),
        example_rules=json.loads(row["example_rules_json"]),
        import_count=row["import_count"],
        version=row["version"],
    )


def _comment(row) -> CommentRecord:
    return CommentRecord(
        comment_id=row["comment_id"],
        owner_id=row["owner_id"],
        channel_id=row["channel_id"],
        video_id=row["video_id"],
        author_id=row["author_id"],
        author_name=row["author_name"],
        text=row["text"],
        published_at=row["published_at"],
        fetched_at=row["fetched_at"],
        status=CommentStatus(row["status"]),
        author_blocked=bool(row["author_blocked"]),
    )


def _event(row) -> MatchEvent:
    return MatchEvent(
        event_id=row["event_id"],
        owner_id=row["owner_id"],
        comment_id=row["comment_id"],
        phrase_id=row["phrase_id"],
        category_id=row["category_id"],
        spans=[MatchSpan(s, e) for s, e in json.loads(row["spans_json"])],
        matched_at=row["matched_at"],
        action_taken=MatchAction(row["action_taken"]),
        action_status=ActionStatus(row["action_status"]),
        fail_reason=row["fail_reason"],
        scan_generation=row["scan_generation"],
    )
