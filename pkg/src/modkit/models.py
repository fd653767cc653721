"""Domain types for the moderation service."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import InvalidOptions


class MatchAction(str, enum.Enum):
    """What happens to a comment when a phrase matches it.

    Severity (weakest to strongest): monitor < review < block < delete.
    When several phrases with different actions match one comment, the
    strongest wins; blocking composes with the comment-level action.
    """

    MONITOR = "monitor"
    REVIEW = "review"
    BLOCK = "block"
    DELETE = "delete"

    @property
    def severity(self) -> int:
        return _SEVERITY[self]


_SEVERITY = {
    MatchAction.MONITOR: 0,
    MatchAction.REVIEW: 1,
    MatchAction.BLOCK: 2,
    MatchAction.DELETE: 3,
}


class CommentStatus(str, enum.Enum):
    VISIBLE = "visible"
    HELD = "held_for_review"
    DELETED = "deleted"


# Forward transitions only; a deleted comment stays deleted.
_STATUS_ORDER = {CommentStatus.VISIBLE: 0, CommentStatus.HELD: 1, CommentStatus.DELETED: 2}


def status_rank(status: CommentStatus) -> int:
    return _STATUS_ORDER[status]


class ActionStatus(str, enum.Enum):
    PENDING = "pending"
    APPLIED = "applied"
    FAILED = "failed"
    # Recorded for audit without enforcement (retroactive scans never act).
    SKIPPED = "skipped"


@dataclass(frozen=True)
class PhraseOptions:
    """Per-phrase matching switches.

    ``leet_variants`` only makes sense on top of spelling variants; the
    combination leet-without-spell is rejected.
    """

    case_sensitive: bool = False
    spell_variants: bool = False
    leet_variants: bool = False

    def __post_init__(self):
        if self.leet_variants and not self.spell_variants:
            raise InvalidOptions("leet_variants requires spell_variants")

    def as_dict(self) -> dict:
        return {
            "case_sensitive": self.case_sensitive,
            "spell_variants": self.spell_variants,
            "leet_variants": self.leet_variants,
        }


class MatchSpan(NamedTuple):
    """Half-open byte range [start, end) into the UTF-8 encoding of a text.

    Boundaries always fall on character boundaries.
    """

    start: int
    end: int


@dataclass(frozen=True)
class CompiledPattern:
    source_phrase_text: str
    options: PhraseOptions
    pattern: object  # compiled regex; treat as opaque
    compiled_at: float


@dataclass
class Phrase:
    phrase_id: str
    owner_id: str
    text: str
    options: PhraseOptions
    action: MatchAction


class ProvenanceKind(str, enum.Enum):
    SCRATCH = "scratch"
    BUILTIN = "builtin"
    CLONED = "cloned"


@dataclass(frozen=True)
class Provenance:
    kind: ProvenanceKind
    source_user_id: str | None = None
    source_id: str | None = None  # builtin_id or source category_id
    snapshot_version: int | None = None

    @staticmethod
    def scratch() -> "Provenance":
        return Provenance(kind=ProvenanceKind.SCRATCH)

    @staticmethod
    def builtin(builtin_id: str, version: int) -> "Provenance":
        return Provenance(kind=ProvenanceKind.BUILTIN, source_id=builtin_id, snapshot_version=version)

    @staticmethod
    def cloned(source_user_id: str, source_category_id: str, version: int) -> "Provenance":
        return Provenance(
            kind=ProvenanceKind.CLONED,
            source_user_id=source_user_id,
            source_id=source_category_id,
            snapshot_version=version,
        )


@dataclass
class Category:
    category_id: str
    owner_id: str
    name: str
    phrase_refs: list[str]
    provenance: Provenance
    created_at: float
    shared: bool = False
    version: int = 1


@dataclass
class BuiltinRule:
    text: str
    options: PhraseOptions
    action: MatchAction


@dataclass
class BuiltinCategory:
    builtin_id: str
    name: str
    description: str
    authors: str
    rules: list[BuiltinRule]
    example_rules: list[str]
    import_count: int
    version: int


@dataclass
class CommentRecord:
    comment_id: str
    owner_id: str
    channel_id: str
    video_id: str
    author_id: str
    author_name: str
    text: str
    published_at: float
    fetched_at: float
    status: CommentStatus = CommentStatus.VISIBLE
    author_blocked: bool = False


@dataclass
class MatchEvent:
    event_id: str
    owner_id: str
    comment_id: str
    phrase_id: str
    category_id: str
    spans: list[MatchSpan]
    matched_at: float
    action_taken: MatchAction
    action_status: ActionStatus
    fail_reason: str | None = None
    scan_generation: int = 0


@dataclass
class PreviewMatch:
    comment_id: str
    spans: list[MatchSpan]
    already_caught: bool


@dataclass
class PreviewResult:
    candidate_text: str
    matches: list[PreviewMatch]
    uncaught_count: int
    total_matched: int


@dataclass
class TimeSeries:
    key: str
    label: str
    buckets: list[tuple[str, int]]  # (ISO date in channel timezone, count), 30 entries

    @property
    def total(self) -> int:
        return sum(count for _, count in self.buckets)


@dataclass
class ConnectorCursor:
    owner_id: str
    channel_id: str
    position: str | None
    last_poll_at: float | None


@dataclass
class Owner:
    owner_id: str
    name: str
    timezone: str = "UTC"
    config_generation: int = 0
    corpus_generation: int = 0


@dataclass
class PollOutcome:
    new_comments: int = 0
    events_created: int = 0
    actions_applied: int = 0

    def as_dict(self) -> dict:
        return {
            "new_comments": self.new_comments,
            "events_created": self.events_created,
            "actions_applied": self.actions_applied,
        }
