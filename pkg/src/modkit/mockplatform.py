"""In-memory stand-in for the video platform's comment API.

Runs the same HTTP surface the real platform would provide (list with
cursor pagination, delete/hold/block, admin seeding and fault injection)
so the whole pipeline is testable offline. Comment ids are derived from
(video_id, sequence) so seeded fixtures are reproducible.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .errors import FormatError

CORPUS_FIELDS = {"video_id", "author_name", "text", "published_at"}


@dataclass
class PlatformComment:
    comment_id: str
    video_id: str
    author_id: str
    author_name: str
    text: str
    published_at: str  # ISO 8601
    seq: int
    deleted: bool = False
    held: bool = False

    def as_json(self) -> dict:
        return {
            "comment_id": self.comment_id,
            "video_id": self.video_id,
            "author_id": self.author_id,
            "author_name": self.author_name,
            "text": self.text,
            "published_at": self.published_at,
            "held": self.held,
        }


def _derive_comment_id(video_id: str, seq: int) -> str:
    digest = hashlib.sha1(f"{video_id}:{seq}".encode("utf-8")).hexdigest()[:12]
    return f"yt{digest}"


def _derive_author_id(author_name: str) -> str:
    return "au" + hashlib.sha1(author_name.encode("utf-8")).hexdigest()[:10]


@dataclass
class MockPlatform:
    channel_id: str = "channel-main"
    comments: dict[str, PlatformComment] = field(default_factory=dict)
    blocked_users: set[str] = field(default_factory=set)
    fault_budget: int = 0
    _seq: int = 0
    _lock: threading.RLock = field(default_factory=threading.RLock)
    # effective state transitions, for exactly-once assertions in tests
    applied: dict[str, int] = field(default_factory=lambda: {"delete": 0, "hold": 0, "block": 0})

    def seed_line(self, line: str, lineno: int) -> PlatformComment:
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", line=lineno) from exc
        if not isinstance(data, dict):
            raise FormatError("corpus line must be a JSON object", line=lineno)
        missing = CORPUS_FIELDS - set(data)
        if missing:
            raise FormatError(f"missing keys: {sorted(missing)}", line=lineno)
        unknown = set(data) - CORPUS_FIELDS - {"comment_id", "author_id"}
        if unknown:
            raise FormatError(f"unknown keys: {sorted(unknown)}", line=lineno)
        with self._lock:
            seq = self._seq + 1
            comment_id = data.get("comment_id") or _derive_comment_id(data["video_id"], seq)
            if comment_id in self.comments:
                raise FormatError(f"duplicate comment id {comment_id}", line=lineno)
            comment = PlatformComment(
                comment_id=comment_id,
                video_id=str(data["video_id"]),
                author_id=data.get("author_id") or _derive_author_id(str(data["author_name"])),
                author_name=str(data["author_name"]),
                text=str(data["text"]),
                published_at=str(data["published_at"]),
                seq=seq,
            )
            self._seq = seq
            self.comments[comment_id] = comment
            return comment

    def seed_corpus(self, raw: str) -> int:
        count = 0
        for lineno, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            self.seed_line(line, lineno)
            count += 1
        return count

    def list_comments(self, cursor: str | None, limit: int) -> tuple[list[dict], str]:
        with self._lock:
            after = int(cursor) if cursor else 0
            rows = sorted(
                (c for c in self.comments.values() if not c.deleted and c.seq > after),
                key=lambda c: c.seq,
            )[:limit]
            next_cursor = rows[-1].seq if rows else after
            return [c.as_json() for c in rows], str(next_cursor)

    def delete_comment(self, comment_id: str) -> bool:
        with self._lock:
            comment = self.comments.get(comment_id)
            if comment is None:
                return False
            if not comment.deleted:
                comment.deleted = True
                self.applied["delete"] += 1
            return True

    def hold_comment(self, comment_id: str) -> bool:
        with self._lock:
            comment = self.comments.get(comment_id)
            if comment is None:
                return False
            if not comment.held:
                comment.held = True
                self.applied["hold"] += 1
            return True

    def block_user(self, author_id: str) -> bool:
        with self._lock:
            if author_id not in self.blocked_users:
                self.blocked_users.add(author_id)
                self.applied["block"] += 1
            return True

    def inject_faults(self, count: int) -> None:
        with self._lock:
            self.fault_budget = count

    def take_fault(self) -> bool:
        with self._lock:
            if self.fault_budget > 0:
                self.fault_budget -= 1
                return True
            return False

    def stats(self) -> dict:
        with self._lock:
            return {
                "total": len(self.comments),
                "deleted": sum(1 for c in self.comments.values() if c.deleted),
                "held": sum(1 for c in self.comments.values() if c.held and not c.deleted),
                "blocked_users": sorted(self.blocked_users),
                "applied": dict(self.applied),
            }


def build_app(platform: MockPlatform) -> FastAPI:
    app = FastAPI(title="mock video platform")

    @app.middleware("http")
    async def fault_injection(request: Request, call_next):
        if not request.url.path.startswith("/admin") and platform.take_fault():
            return JSONResponse({"error": "injected fault"}, status_code=503)
        return await call_next(request)

    @app.get("/comments")
    def list_comments(cursor: str = "", limit: int = 100):
        comments, next_cursor = platform.list_comments(cursor or None, max(1, min(limit, 500)))
        return {"comments": comments, "next_cursor": next_cursor, "channel_id": platform.channel_id}

    @app.delete("/comments/{comment_id}")
    def delete_comment(comment_id: str):
        if not platform.delete_comment(comment_id):
            return JSONResponse({"error": "no such comment"}, status_code=404)
        return {"ok": True}

    @app.post("/comments/{comment_id}/hold")
    def hold_comment(comment_id: str):
        if not platform.hold_comment(comment_id):
            return JSONResponse({"error": "no such comment"}, status_code=404)
        return {"ok": True}

    @app.post("/users/{author_id}/block")
    def block_user(author_id: str):
        platform.block_user(author_id)
        return {"ok": True}

    @app.post("/admin/seed")
    async def seed(request: Request):
        raw = (await request.body()).decode("utf-8")
        try:
            count = platform.seed_corpus(raw)
        except FormatError as exc:
            return JSONResponse({"error": exc.code, "message": str(exc)}, status_code=400)
        return {"count": count}

    @app.post("/admin/fault")
    def fault(count: int = 0):
        platform.inject_faults(count)
        return {"ok": True, "count": count}

    @app.get("/admin/state")
    def state():
        return platform.stats()

    @app.get("/admin/comments/{comment_id}")
    def comment_state(comment_id: str):
        comment = platform.comments.get(comment_id)
        if comment is None:
            return JSONResponse({"error": "no such comment"}, status_code=404)
        data = comment.as_json()
        data["deleted"] = comment.deleted
        return data

    return app
