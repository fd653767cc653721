"""Acceptance suite: one test per release criterion, each printing a
PASS line when it holds. Run with `pytest tests/test_acceptance.py -v -s`.
"""

from __future__ import annotations

import datetime as dt
import json
import random
import time
from zoneinfo import ZoneInfo

import pytest
from starlette.testclient import TestClient

from modkit import analytics, catalog, ingestion, preview
from modkit.api import build_api
from modkit.connector import HttpConnector
from modkit.errors import ModerationError
from modkit.mockplatform import MockPlatform, build_app as build_platform_app
from modkit.models import (
    ActionStatus,
    CommentRecord,
    CommentStatus,
    MatchAction,
    MatchEvent,
    MatchSpan,
    PhraseOptions,
)
from modkit.patterns import compile_phrase, find_matches, matches
from modkit.serialize import (
    category_view,
    comment_page_view,
    error_view,
    phrase_view,
    poll_outcome_view,
    preview_view,
    series_view,
)
from modkit.store import integrity_violations, open_store

from .oracle import oracle_find_matches


def report(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


# ---------------------------------------------------------------------------
# 1. Variant semantics
# ---------------------------------------------------------------------------


def test_variant_semantics_exact():
    variants = compile_phrase("shit", PhraseOptions(spell_variants=True))
    assert matches(variants, "shiiit")
    assert matches(variants, "shittt")
    assert not matches(variants, "mishit")
    acronym = compile_phrase("ABCD", PhraseOptions(case_sensitive=True))
    assert matches(acronym, "ABCD")
    assert not matches(acronym, "abcd")
    report("variant semantics (shiiit/shittt caught, mishit not; ABCD case-sensitive)")


# ---------------------------------------------------------------------------
# 2. Oracle equivalence, 10,000 randomized cases in < 60 s
# ---------------------------------------------------------------------------

LETTERS = "aseiothbx"
GLYPHS = "4@3!1$057"
TEXT_CHARS = LETTERS + GLYPHS + "   ..,-é"


def _random_token(rng: random.Random) -> str:
    length = rng.randint(1, 6)
    chars = []
    for _ in range(length):
        if rng.random() < 0.15:
            chars.append(rng.choice(GLYPHS))
        else:
            ch = rng.choice(LETTERS)
            chars.append(ch.upper() if rng.random() < 0.2 else ch)
    return "".join(chars)


def _random_phrase(rng: random.Random) -> str:
    return " ".join(_random_token(rng) for _ in range(rng.randint(1, 3)))


def _random_text(rng: random.Random, phrase: str) -> str:
    length = rng.randint(0, 200)
    chars = [rng.choice(TEXT_CHARS) for _ in range(length)]
    text = "".join(chars)
    if rng.random() < 0.4 and text:
        # splice the phrase (or a mangled variant) in so matches are common
        snippet = phrase
        if rng.random() < 0.5:
            snippet = "".join(c * rng.randint(1, 3) if c.isalpha() else c for c in phrase)
        pos = rng.randrange(len(text))
        text = text[:pos] + " " + snippet + " " + text[pos:]
    return text


def _random_options(rng: random.Random) -> PhraseOptions:
    spell = rng.random() < 0.7
    return PhraseOptions(
        case_sensitive=rng.random() < 0.3,
        spell_variants=spell,
        leet_variants=spell and rng.random() < 0.5,
    )


def test_oracle_equivalence_10k_cases():
    rng = random.Random(20240301)
    started = time.perf_counter()
    for case in range(10_000):
        phrase = _random_phrase(rng)
        options = _random_options(rng)
        text = _random_text(rng, phrase)
        got = [tuple(s) for s in find_matches(compile_phrase(phrase, options), text)]
        expected = oracle_find_matches(
            phrase,
            text,
            case_sensitive=options.case_sensitive,
            spell_variants=options.spell_variants,
            leet_variants=options.leet_variants,
        )
        assert got == expected, (
            f"case {case}: phrase={phrase!r} options={options} text={text!r}: {got} != {expected}"
        )
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"10k oracle-equivalence cases took {elapsed:.1f}s (budget 60s)"
    report(f"oracle equivalence (10,000 randomized cases, 0 discrepancies, {elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# 3. Preview correctness + latency on a 10k corpus
# ---------------------------------------------------------------------------

VOCAB = [
    "kebab", "recipe", "video", "great", "ugly", "fat", "spam", "scam", "troll",
    "noob", "loser", "idiot", "stupid", "awful", "lovely", "tasty", "music",
    "subscribe", "channel", "amazing", "boring", "weird", "creepy", "gross",
    "shit", "damn", "heck", "chess", "cooking", "dinner", "plate", "spice",
]


def _mangle(rng: random.Random, word: str) -> str:
    out = []
    for ch in word:
        if ch.isalpha() and rng.random() < 0.3:
            out.append(ch * rng.randint(2, 3))
        else:
            out.append(ch)
    return "".join(out)


@pytest.fixture(scope="module")
def big_corpus(tmp_path_factory):
    rng = random.Random(99)
    path = tmp_path_factory.mktemp("preview") / "big.db"
    store = open_store(path)
    owner = store.ensure_owner("bigchannel")
    texts = []
    for i in range(10_000):
        words = []
        for _ in range(rng.randint(3, 8)):
            word = rng.choice(VOCAB)
            if rng.random() < 0.08:
                word = _mangle(rng, word)
            words.append(word)
        texts.append(" ".join(words))
    with store.write():
        for i, text in enumerate(texts):
            store.upsert_comment(
                CommentRecord(
                    comment_id=f"cm{i:06d}",
                    owner_id=owner.owner_id,
                    channel_id="chan",
                    video_id=f"v{i % 40}",
                    author_id=f"a{i % 500}",
                    author_name=f"user{i % 500}",
                    text=text,
                    published_at=1_600_000_000.0 + i,
                    fetched_at=1_700_000_000.0,
                )
            )
        store.bump_corpus_generation(owner.owner_id)
    config_words = ["spam", "troll", "idiot", "scam", "gross", "creepy", "shit", "loser", "stupid", "awful"]
    cat = catalog.create_category(store, owner.owner_id, "Configured")
    for word in config_words:
        catalog.add_phrase(
            store, owner.owner_id, cat.category_id, word,
            PhraseOptions(spell_variants=True), MatchAction.MONITOR,
        )
    yield store, owner, texts, config_words
    store.close()


def test_preview_correctness_and_latency_10k(big_corpus):
    store, owner, texts, config_words = big_corpus
    rng = random.Random(4242)
    ids = [f"cm{i:06d}" for i in range(len(texts))]

    def oracle_set(word: str, options: PhraseOptions) -> set[str]:
        return {
            cid
            for cid, text in zip(ids, texts)
            if oracle_find_matches(
                word,
                text,
                case_sensitive=options.case_sensitive,
                spell_variants=options.spell_variants,
                leet_variants=options.leet_variants,
            )
        }

    config_options = PhraseOptions(spell_variants=True)
    brute_caught: set[str] = set()
    for word in config_words:
        brute_caught |= oracle_set(word, config_options)

    latencies = []
    checked = 0
    for i in range(100):
        word = rng.choice(VOCAB) if rng.random() < 0.7 else _mangle(rng, rng.choice(VOCAB))
        options = PhraseOptions(
            case_sensitive=False,
            spell_variants=(sv := rng.random() < 0.8),
            leet_variants=sv and rng.random() < 0.3,
        )
        started = time.perf_counter()
        result = preview.preview_phrase(store, owner.owner_id, word, options)
        latencies.append(time.perf_counter() - started)
        expected_uncaught = len(oracle_set(word, options) - brute_caught)
        assert result.uncaught_count == expected_uncaught, f"candidate {word!r}"
        checked += 1
    latencies.sort()
    p95 = latencies[94]
    assert p95 < 0.2, f"p95 preview latency {p95 * 1000:.1f}ms exceeds 200ms"
    report(
        f"preview correctness (100 candidates exact on 10k corpus; p95 {p95 * 1000:.1f}ms < 200ms)"
    )


# ---------------------------------------------------------------------------
# 4. Shared identity under a randomized 1,000-step walk
# ---------------------------------------------------------------------------


def test_shared_identity_random_walk(tmp_path):
    store = open_store(tmp_path / "walk.db")
    owner = store.ensure_owner("walker")
    rng = random.Random(31337)
    cats = [catalog.create_category(store, owner.owner_id, f"cat{i}") for i in range(4)]
    texts = [f"term{i}" for i in range(10)]
    actions = list(MatchAction)
    steps = 0
    for _ in range(1000):
        roll = rng.random()
        cat = rng.choice(cats)
        text = rng.choice(texts)
        try:
            if roll < 0.45:
                spell = rng.random() < 0.6
                catalog.add_phrase(
                    store, owner.owner_id, cat.category_id, text,
                    PhraseOptions(
                        case_sensitive=rng.random() < 0.3,
                        spell_variants=spell,
                        leet_variants=spell and rng.random() < 0.3,
                    ),
                    rng.choice(actions),
                )
            elif roll < 0.7:
                phrase = store.phrase_by_text(owner.owner_id, text)
                if phrase is not None:
                    catalog.remove_phrase(store, owner.owner_id, cat.category_id, phrase.phrase_id)
            else:
                phrase = store.phrase_by_text(owner.owner_id, text)
                if phrase is not None:
                    spell = rng.random() < 0.6
                    catalog.edit_phrase(
                        store, owner.owner_id, phrase.phrase_id,
                        options=PhraseOptions(
                            case_sensitive=rng.random() < 0.3,
                            spell_variants=spell,
                            leet_variants=spell and rng.random() < 0.3,
                        ),
                        action=rng.choice(actions),
                    )
        except ModerationError:
            pass
        steps += 1
        views: dict[str, tuple] = {}
        for c in store.list_categories(owner.owner_id):
            for pid in c.phrase_refs:
                p = store.get_phrase(pid)
                assert p is not None, f"dangling ref {pid} after step {steps}"
                key = (p.text, p.options.case_sensitive, p.options.spell_variants,
                       p.options.leet_variants, p.action)
                previous = views.setdefault(pid, key)
                assert previous == key, f"shared identity violated at step {steps}"
    assert steps == 1000
    store.close()
    report("shared identity (1,000-step randomized walk across 4 categories)")


# ---------------------------------------------------------------------------
# 5. Analytics conservation
# ---------------------------------------------------------------------------


def test_analytics_conservation(tmp_path):
    store = open_store(tmp_path / "analytics.db")
    owner = store.ensure_owner("metrics")
    rng = random.Random(777)
    window_end = dt.date(2024, 6, 30)
    utc = ZoneInfo("UTC")

    cats = [catalog.create_category(store, owner.owner_id, f"cat{i}") for i in range(3)]
    phrase_map = {}
    for i, cat in enumerate(cats):
        for j in range(2):
            p = catalog.add_phrase(
                store, owner.owner_id, cat.category_id, f"w{i}{j}", PhraseOptions(), MatchAction.MONITOR
            )
            phrase_map.setdefault(cat.category_id, []).append(p)

    with store.write():
        for i in range(150):
            store.upsert_comment(
                CommentRecord(
                    comment_id=f"cm{i:04d}",
                    owner_id=owner.owner_id,
                    channel_id="c",
                    video_id="v",
                    author_id="a",
                    author_name="n",
                    text="t",
                    published_at=1_700_000_000.0,
                    fetched_at=1_700_000_000.0,
                )
            )
        raw_events = []
        for _ in range(1200):
            cat = rng.choice(cats)
            phrase = rng.choice(phrase_map[cat.category_id])
            day_offset = rng.randrange(0, 45)
            when = dt.datetime(
                window_end.year, window_end.month, window_end.day, 12, tzinfo=utc
            ) - dt.timedelta(days=day_offset)
            event = MatchEvent(
                event_id=store.next_id("event"),
                owner_id=owner.owner_id,
                comment_id=f"cm{rng.randrange(150):04d}",
                phrase_id=phrase.phrase_id,
                category_id=cat.category_id,
                spans=[MatchSpan(0, 1)],
                matched_at=when.timestamp(),
                action_taken=MatchAction.MONITOR,
                action_status=ActionStatus.SKIPPED,
            )
            if store.insert_event(event):
                raw_events.append(event)

    window = {d.isoformat() for d in analytics.window_dates(window_end)}
    for series in analytics.category_series(store, owner.owner_id, window_end):
        assert len(series.buckets) == 30
        expected = {
            e.comment_id
            for e in raw_events
            if e.category_id == series.key
            and dt.datetime.fromtimestamp(e.matched_at, utc).date().isoformat() in window
        }
        assert series.total == len(expected), f"conservation broken for {series.label}"

    # one comment hit by two phrases of one category on one day counts once
    fresh = catalog.create_category(store, owner.owner_id, "dedupe")
    p1 = catalog.add_phrase(store, owner.owner_id, fresh.category_id, "z1", PhraseOptions(), MatchAction.MONITOR)
    p2 = catalog.add_phrase(store, owner.owner_id, fresh.category_id, "z2", PhraseOptions(), MatchAction.MONITOR)
    when = dt.datetime(window_end.year, window_end.month, window_end.day, 9, tzinfo=utc).timestamp()
    with store.write():
        for pid in (p1.phrase_id, p2.phrase_id):
            store.insert_event(
                MatchEvent(
                    event_id=store.next_id("event"),
                    owner_id=owner.owner_id,
                    comment_id="cm0000",
                    phrase_id=pid,
                    category_id=fresh.category_id,
                    spans=[MatchSpan(0, 1)],
                    matched_at=when,
                    action_taken=MatchAction.MONITOR,
                    action_status=ActionStatus.SKIPPED,
                )
            )
    dedupe = [s for s in analytics.category_series(store, owner.owner_id, window_end) if s.label == "dedupe"][0]
    assert dedupe.total == 1
    store.close()
    report("analytics conservation (random fixtures; per-category sums equal distinct recounts)")


# ---------------------------------------------------------------------------
# 6. Copy isolation and import counts
# ---------------------------------------------------------------------------


def test_builtin_copy_isolation_and_import_count(tmp_path):
    store = open_store(tmp_path / "builtins.db")
    catalog.load_builtin_seeds(store)
    owner = store.ensure_owner("importer")
    baselines = {b.builtin_id: store.get_builtin_raw(b.builtin_id) for b in store.list_builtins()}
    assert len(baselines) == 5
    for builtin_id in baselines:
        first = catalog.import_builtin(store, owner.owner_id, builtin_id)
        second = catalog.import_builtin(store, owner.owner_id, builtin_id)
        assert first.category_id != second.category_id
        for copy in (first, second):
            catalog.edit_phrase(
                store, owner.owner_id, copy.phrase_refs[0],
                options=PhraseOptions(case_sensitive=True), action=MatchAction.BLOCK,
            )
        catalog.remove_phrase(store, owner.owner_id, first.category_id, first.phrase_refs[-1])
        catalog.add_phrase(
            store, owner.owner_id, second.category_id, f"extra-{builtin_id}",
            PhraseOptions(), MatchAction.MONITOR,
        )
    for builtin_id, baseline in baselines.items():
        assert store.get_builtin_raw(builtin_id) == baseline, f"builtin {builtin_id} mutated"
        assert store.get_builtin(builtin_id).import_count == 2
    store.close()
    report("copy isolation (5 builtins imported twice, mutated copies; builtins byte-identical, counts exact)")


# ---------------------------------------------------------------------------
# 7. Portable format round trip, 100 randomized categories
# ---------------------------------------------------------------------------


def test_portable_round_trip_100_random(tmp_path):
    store = open_store(tmp_path / "portable.db")
    exporter = store.ensure_owner("exporter")
    rng = random.Random(2024)
    actions = list(MatchAction)
    for case in range(100):
        cat = catalog.create_category(store, exporter.owner_id, f"random-{case}")
        texts = rng.sample(
            [f"{a}{b}" for a in VOCAB for b in ("", " thing", "-mark", "x")], rng.randint(1, 10)
        )
        for text in texts:
            spell = rng.random() < 0.7
            catalog.add_phrase(
                store, exporter.owner_id, cat.category_id, text,
                PhraseOptions(
                    case_sensitive=rng.random() < 0.3,
                    spell_variants=spell,
                    leet_variants=spell and rng.random() < 0.4,
                ),
                rng.choice(actions),
            )
        doc = catalog.export_category(store, exporter.owner_id, cat.category_id)
        fresh = store.ensure_owner(f"importer-{case}")
        imported = catalog.import_document(store, fresh.owner_id, doc.dumps())
        back = catalog.export_category(store, fresh.owner_id, imported.category_id)
        assert [r.as_dict() for r in back.rules] == [r.as_dict() for r in doc.rules], f"case {case}"
    store.close()
    report("portable round trip (100 randomized categories, rules deep-equal)")


# ---------------------------------------------------------------------------
# 8. End-to-end pipeline against the mock platform
# ---------------------------------------------------------------------------


def _corpus_lines(entries):
    return "\n".join(
        json.dumps(
            {
                "video_id": "vid",
                "author_name": author,
                "text": text,
                "published_at": "2024-03-01T10:00:00+00:00",
            }
        )
        for author, text in entries
    )


def test_end_to_end_pipeline(tmp_path):
    store = open_store(tmp_path / "e2e.db")
    owner = store.ensure_owner("pipeline")
    platform = MockPlatform()
    connector = HttpConnector(client=TestClient(build_platform_app(platform)))

    platform.seed_corpus(_corpus_lines([(f"user{i % 50}", f"historic comment {i}") for i in range(1000)]))
    assert ingestion.backfill(store, owner.owner_id, connector) == 1000
    assert platform.stats()["deleted"] == 0
    assert platform.stats()["held"] == 0
    assert store.events_for_owner(owner.owner_id) == []

    cat = catalog.create_category(store, owner.owner_id, "Enforcement")
    catalog.add_phrase(
        store, owner.owner_id, cat.category_id, "zapword",
        PhraseOptions(spell_variants=True), MatchAction.DELETE,
    )
    catalog.add_phrase(
        store, owner.owner_id, cat.category_id, "checkword",
        PhraseOptions(spell_variants=True), MatchAction.REVIEW,
    )

    new_comments = []
    for i in range(10):
        new_comments.append((f"newbie{i}", f"zapword offensive {i}"))
    for i in range(5):
        new_comments.append((f"suspect{i}", f"borderline checkword {i}"))
    for i in range(35):
        new_comments.append((f"fan{i}", f"wholesome comment {i}"))
    platform.seed_corpus(_corpus_lines(new_comments))

    total = poll_outcome_view(ingestion.poll_once(store, owner.owner_id, connector))
    second = poll_outcome_view(ingestion.poll_once(store, owner.owner_id, connector))
    for key in total:
        total[key] += second[key]

    stats = platform.stats()
    assert stats["deleted"] == 10, stats
    assert stats["held"] == 5, stats
    assert total["new_comments"] == 50
    events = store.events_for_owner(owner.owner_id)
    assert len(events) == 15
    assert all(e.action_status is ActionStatus.APPLIED for e in events)

    rerun = ingestion.poll_once(store, owner.owner_id, connector)
    assert rerun.as_dict() == {"new_comments": 0, "events_created": 0, "actions_applied": 0}
    assert platform.applied["delete"] == 10
    assert platform.applied["hold"] == 5
    assert store.comment_count(owner.owner_id) == 1050
    store.close()
    report("end-to-end pipeline (1000 backfilled w/o actions; 10 deleted + 5 held; idempotent rerun)")


# ---------------------------------------------------------------------------
# 9. Crash consistency at every persistence point
# ---------------------------------------------------------------------------

KILL_POINTS = [
    ("recover", 1),
    ("fetch", 1),
    ("fetch", 2),
    ("page_txn_begin", 1),
    ("page_txn_end", 1),
    ("after_page", 1),
    ("before_action", 1),
    ("before_action", 2),
    ("mid_action", 1),
    ("after_action", 1),
    ("after_action", 2),
    ("status_txn", 1),
    ("status_txn", 2),
    ("after_status", 1),
]


class _KillPoint(Exception):
    pass


class _KillAt:
    def __init__(self, point, occurrence):
        self.point = point
        self.occurrence = occurrence
        self.seen = 0

    def __call__(self, point):
        if point == self.point:
            self.seen += 1
            if self.seen == self.occurrence:
                raise _KillPoint(point)


def test_crash_consistency_every_kill_point(tmp_path):
    for index, (point, occurrence) in enumerate(KILL_POINTS):
        store = open_store(tmp_path / f"kill_{index}.db")
        owner = store.ensure_owner("fragile")
        platform = MockPlatform()
        connector = HttpConnector(client=TestClient(build_platform_app(platform)))
        cat = catalog.create_category(store, owner.owner_id, "Rules")
        catalog.add_phrase(store, owner.owner_id, cat.category_id, "zapword", PhraseOptions(), MatchAction.DELETE)
        catalog.add_phrase(store, owner.owner_id, cat.category_id, "holdword", PhraseOptions(), MatchAction.REVIEW)
        ingestion.backfill(store, owner.owner_id, connector)
        platform.seed_corpus(
            _corpus_lines([("a", "zapword one"), ("b", "holdword two"), ("c", "clean three")])
        )
        try:
            ingestion.poll_once(store, owner.owner_id, connector, kill=_KillAt(point, occurrence))
        except _KillPoint:
            pass
        assert integrity_violations(store) == [], f"integrity broken after kill at {point}#{occurrence}"

        ingestion.poll_once(store, owner.owner_id, connector)
        assert integrity_violations(store) == []
        stats = platform.stats()
        assert stats["applied"]["delete"] == 1, f"{point}#{occurrence}: {stats}"
        assert stats["applied"]["hold"] == 1, f"{point}#{occurrence}: {stats}"
        assert store.comment_count(owner.owner_id) == 3
        events = store.events_for_owner(owner.owner_id)
        assert len(events) == 2
        assert all(e.action_status is ActionStatus.APPLIED for e in events)
        final = ingestion.poll_once(store, owner.owner_id, connector)
        assert final.as_dict() == {"new_comments": 0, "events_created": 0, "actions_applied": 0}
        store.close()
    report(f"crash consistency ({len(KILL_POINTS)} kill points, exactly-once after recovery)")


# ---------------------------------------------------------------------------
# 10. API <-> module differential, 1,000 randomized sequences
# ---------------------------------------------------------------------------


class FixedClock:
    def __init__(self, value=1_700_000_000.0):
        self.value = value

    def __call__(self):
        return self.value


NAME_POOL = ["Politics", "Looks", "Spam", "Racism", "Collabs"]
TEXT_POOL = ["ugly", "fat", "kebab", "zapword", "spam link", "you should play", ""]
DOC_POOL = [
    {
        "format_version": 1,
        "name": "Shared Pack",
        "description": "",
        "authors": "someone",
        "rules": [
            {"text": "packword", "case_sensitive": False, "spell_variants": True,
             "leet_variants": False, "action": "review"},
        ],
    }
]


def _build_script(rng: random.Random) -> list[dict]:
    ops = []
    for _ in range(rng.randint(4, 9)):
        actor = rng.choice(["alice", "bob"])
        kind = rng.choice(
            [
                "create_category", "create_category", "add_phrase", "add_phrase", "add_phrase",
                "patch_phrase", "remove_phrase", "patch_category", "delete_category",
                "get_category", "list_categories", "list_builtins", "import_builtin",
                "clone", "diff_upstream", "export", "import_doc", "preview",
                "analytics_categories", "analytics_phrases", "comments",
                "backfill", "poll", "rescan",
            ]
        )
        ops.append(
            {
                "actor": actor,
                "kind": kind,
                "name": rng.choice(NAME_POOL),
                "text": rng.choice(TEXT_POOL),
                "action": rng.choice([a.value for a in MatchAction]),
                "spell": rng.random() < 0.6,
                "case": rng.random() < 0.2,
                "shared": rng.random() < 0.5,
                "cat_pick": rng.randrange(1000),
                "phrase_pick": rng.randrange(1000),
                "builtin": rng.choice(["homophobia", "physical_violence", "missing_builtin"]),
                "doc": rng.choice(DOC_POOL),
                "search": rng.choice(["", "kebab", "zap"]),
                "sort": rng.choice(["recency", "author", "status"]),
                "page_size": rng.choice([10, 50]),
            }
        )
    return ops


def _pick(items: list[str], index: int) -> str:
    return items[index % len(items)] if items else "c9999999"


def _run_differential_sequence(seq: int, tmp_path) -> None:
    rng = random.Random(1_000_000 + seq)
    script = _build_script(rng)
    corpus = _corpus_lines(
        [(f"user{i}", text) for i, text in enumerate(["a kebab tale", "zapword here", "plain", "uggly thing"])]
    )

    store_api = open_store(tmp_path / f"api_{seq}.db", clock=FixedClock())
    store_direct = open_store(tmp_path / f"dir_{seq}.db", clock=FixedClock())
    catalog.load_builtin_seeds(store_api)
    catalog.load_builtin_seeds(store_direct)
    platform_api, platform_direct = MockPlatform(), MockPlatform()
    platform_api.seed_corpus(corpus)
    platform_direct.seed_corpus(corpus)
    connector_api = HttpConnector(client=TestClient(build_platform_app(platform_api)))
    connector_direct = HttpConnector(client=TestClient(build_platform_app(platform_direct)))
    api = TestClient(build_api(store_api, connector_api))

    tokens = {}
    owners_direct = {}
    for name in ("alice", "bob"):
        body = api.post("/login", json={"owner_name": name}).json()
        tokens[name] = {"Authorization": f"Bearer {body['token']}"}
        owners_direct[name] = store_direct.ensure_owner(name).owner_id

    categories: list[str] = []
    phrases: list[str] = []

    def direct(fn, success_status=200):
        try:
            return success_status, fn()
        except ModerationError as exc:
            return exc.http_status, error_view(exc)

    window_end = "2024-03-10"
    for op in script:
        actor = op["actor"]
        headers = tokens[actor]
        owner_id = owners_direct[actor]
        cat_id = _pick(categories, op["cat_pick"])
        phrase_id = _pick(phrases, op["phrase_pick"]) if phrases else "p9999999"
        kind = op["kind"]

        if kind == "create_category":
            got = api.post("/categories", json={"name": op["name"]}, headers=headers)
            want = direct(
                lambda: category_view(store_direct, catalog.create_category(store_direct, owner_id, op["name"])),
                201,
            )
        elif kind == "add_phrase":
            body = {
                "text": op["text"],
                "spell_variants": op["spell"],
                "case_sensitive": op["case"],
                "action": op["action"],
            }
            got = api.post(f"/categories/{cat_id}/phrases", json=body, headers=headers)
            want = direct(
                lambda: phrase_view(
                    catalog.add_phrase(
                        store_direct, owner_id, cat_id, op["text"],
                        PhraseOptions(case_sensitive=op["case"], spell_variants=op["spell"]),
                        MatchAction(op["action"]),
                    )
                ),
                201,
            )
        elif kind == "patch_phrase":
            got = api.patch(f"/phrases/{phrase_id}", json={"action": op["action"]}, headers=headers)
            want = direct(
                lambda: phrase_view(
                    catalog.edit_phrase(store_direct, owner_id, phrase_id, action=MatchAction(op["action"]))
                )
            )
        elif kind == "remove_phrase":
            got = api.delete(f"/categories/{cat_id}/phrases/{phrase_id}", headers=headers)

            def _remove():
                catalog.remove_phrase(store_direct, owner_id, cat_id, phrase_id)
                return {"ok": True}

            want = direct(_remove)
        elif kind == "patch_category":
            got = api.patch(f"/categories/{cat_id}", json={"shared": op["shared"]}, headers=headers)

            def _patch_cat():
                catalog.set_category_shared(store_direct, owner_id, cat_id, op["shared"])
                return category_view(store_direct, catalog.get_category(store_direct, owner_id, cat_id))

            want = direct(_patch_cat)
        elif kind == "delete_category":
            got = api.delete(f"/categories/{cat_id}", headers=headers)

            def _delete_cat():
                catalog.delete_category(store_direct, owner_id, cat_id)
                return {"ok": True}

            want = direct(_delete_cat)
            if got.status_code == 200 and cat_id in categories:
                categories.remove(cat_id)
        elif kind == "get_category":
            got = api.get(f"/categories/{cat_id}", headers=headers)
            want = direct(
                lambda: category_view(store_direct, catalog.get_category(store_direct, owner_id, cat_id))
            )
        elif kind == "list_categories":
            got = api.get("/categories", headers=headers)
            want = direct(
                lambda: [
                    category_view(store_direct, c) for c in catalog.list_categories(store_direct, owner_id)
                ]
            )
        elif kind == "list_builtins":
            got = api.get("/builtins", headers=headers)
            from modkit.serialize import builtin_view

            want = direct(lambda: [builtin_view(b) for b in store_direct.list_builtins()])
        elif kind == "import_builtin":
            got = api.post(f"/builtins/{op['builtin']}/import", headers=headers)
            want = direct(
                lambda: category_view(
                    store_direct, catalog.import_builtin(store_direct, owner_id, op["builtin"])
                ),
                201,
            )
        elif kind == "clone":
            got = api.post(f"/categories/{cat_id}/clone", headers=headers)

            def _clone():
                source = store_direct.get_category(cat_id)
                source_user = source.owner_id if source is not None else "unknown"
                return category_view(
                    store_direct, catalog.clone_shared(store_direct, owner_id, source_user, cat_id)
                )

            want = direct(_clone, 201)
        elif kind == "diff_upstream":
            got = api.get(f"/categories/{cat_id}/diff-upstream", headers=headers)
            want = direct(lambda: catalog.diff_upstream(store_direct, owner_id, cat_id))
        elif kind == "export":
            got = api.get(f"/categories/{cat_id}/export", headers=headers)
            want = direct(lambda: catalog.export_category(store_direct, owner_id, cat_id).as_dict())
        elif kind == "import_doc":
            raw = json.dumps(op["doc"])
            got = api.post("/categories/import", content=raw, headers=headers)
            want = direct(
                lambda: category_view(store_direct, catalog.import_document(store_direct, owner_id, raw)),
                201,
            )
        elif kind == "preview":
            got = api.get(
                "/preview",
                params={"text": op["text"], "spell_variants": str(op["spell"]).lower()},
                headers=headers,
            )
            want = direct(
                lambda: preview_view(
                    store_direct,
                    preview.preview_phrase(
                        store_direct, owner_id, op["text"], PhraseOptions(spell_variants=op["spell"])
                    ),
                )
            )
        elif kind == "analytics_categories":
            got = api.get("/analytics/categories", params={"window_end": window_end}, headers=headers)
            want = direct(
                lambda: [
                    series_view(s)
                    for s in analytics.category_series(
                        store_direct, owner_id, dt.date.fromisoformat(window_end)
                    )
                ]
            )
        elif kind == "analytics_phrases":
            got = api.get(
                f"/analytics/categories/{cat_id}/phrases",
                params={"window_end": window_end},
                headers=headers,
            )
            want = direct(
                lambda: [
                    series_view(s)
                    for s in analytics.phrase_series(
                        store_direct, owner_id, cat_id, dt.date.fromisoformat(window_end)
                    )
                ]
            )
        elif kind == "comments":
            got = api.get(
                "/comments",
                params={"search": op["search"], "sort": op["sort"], "page_size": str(op["page_size"])},
                headers=headers,
            )
            want = direct(
                lambda: comment_page_view(
                    analytics.comment_table(
                        store_direct, owner_id,
                        search_text=op["search"] or None,
                        sort=op["sort"],
                        page=1,
                        page_size=op["page_size"],
                    )
                )
            )
        elif kind == "backfill":
            got = api.post("/ingest/backfill", headers=headers)
            want = direct(
                lambda: {"ingested": ingestion.backfill(store_direct, owner_id, connector_direct)}
            )
        elif kind == "poll":
            got = api.post("/ingest/poll", headers=headers)
            want = direct(
                lambda: poll_outcome_view(ingestion.poll_once(store_direct, owner_id, connector_direct))
            )
        elif kind == "rescan":
            got = api.post("/ingest/rescan", headers=headers)
            want = direct(lambda: {"events_created": ingestion.rescan(store_direct, owner_id)})
        else:  # pragma: no cover
            raise AssertionError(kind)

        assert (got.status_code, got.json()) == want, (
            f"seq {seq} op {kind} by {actor}: api=({got.status_code}, {got.json()}) direct={want}"
        )

        if kind in ("create_category", "import_builtin", "clone", "import_doc") and got.status_code == 201:
            categories.append(got.json()["category_id"])
        if kind == "add_phrase" and got.status_code == 201:
            phrases.append(got.json()["phrase_id"])

    store_api.close()
    store_direct.close()


def test_api_module_differential_1000_sequences(tmp_path):
    for seq in range(1000):
        _run_differential_sequence(seq, tmp_path)
    report("API/module differential (1,000 randomized request sequences, responses equal)")
