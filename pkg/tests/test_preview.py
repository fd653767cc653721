import pytest

from modkit import catalog
from modkit.errors import EmptyPhrase
from modkit.models import CommentRecord, MatchAction, PhraseOptions
from modkit.preview import PreviewSession, preview_phrase

from .oracle import oracle_find_matches

OPTS = PhraseOptions(spell_variants=True)
PLAIN = PhraseOptions()


def add_comments(store, owner_id, texts):
    with store.write():
        for i, text in enumerate(texts):
            store.upsert_comment(
                CommentRecord(
                    comment_id=f"cm{i:05d}",
                    owner_id=owner_id,
                    channel_id="chan",
                    video_id="vid",
                    author_id=f"a{i}",
                    author_name=f"author{i}",
                    text=text,
                    published_at=1000.0 + i,
                    fetched_at=2000.0 + i,
                )
            )
        store.bump_corpus_generation(owner_id)


def test_single_uncaught_match(store, owner):
    add_comments(store, owner.owner_id, ["you are ugly", "nice video"])
    result = preview_phrase(store, owner.owner_id, "ugly", OPTS)
    assert len(result.matches) == 1
    assert result.matches[0].already_caught is False
    assert result.uncaught_count == 1


def test_no_bigram_match(store, owner):
    add_comments(store, owner.owner_id, ["you are ugly", "nice video"])
    cat = catalog.create_category(store, owner.owner_id, "Looks")
    catalog.add_phrase(store, owner.owner_id, cat.category_id, "ugly", OPTS, MatchAction.REVIEW)
    result = preview_phrase(store, owner.owner_id, "ugly fat", PLAIN)
    assert result.matches == []
    assert result.uncaught_count == 0


def test_partially_caught_counts(store, owner):
    add_comments(store, owner.owner_id, ["ugly one", "ugly two and fat", "fat ugly three"])
    cat = catalog.create_category(store, owner.owner_id, "Existing")
    catalog.add_phrase(store, owner.owner_id, cat.category_id, "fat", OPTS, MatchAction.MONITOR)
    result = preview_phrase(store, owner.owner_id, "ugly", OPTS)
    assert len(result.matches) == 3
    assert result.uncaught_count == 1


def test_monitor_only_phrases_still_catch(store, owner):
    add_comments(store, owner.owner_id, ["pure spam"])
    cat = catalog.create_category(store, owner.owner_id, "Watch")
    catalog.add_phrase(store, owner.owner_id, cat.category_id, "spam", OPTS, MatchAction.MONITOR)
    result = preview_phrase(store, owner.owner_id, "spam", OPTS)
    assert result.uncaught_count == 0
    assert result.matches[0].already_caught is True


def test_matches_are_newest_first(store, owner):
    add_comments(store, owner.owner_id, ["ugly old", "middle", "ugly new"])
    result = preview_phrase(store, owner.owner_id, "ugly", OPTS)
    assert [m.comment_id for m in result.matches] == ["cm00002", "cm00000"]


def test_spans_come_from_the_engine(store, owner):
    add_comments(store, owner.owner_id, ["total shiiit show"])
    result = preview_phrase(store, owner.owner_id, "shit", OPTS)
    expect = oracle_find_matches("shit", "total shiiit show", spell_variants=True)
    assert [tuple(s) for s in result.matches[0].spans] == expect


def test_blank_candidate_rejected(store, owner):
    with pytest.raises(EmptyPhrase):
        preview_phrase(store, owner.owner_id, "  ", PLAIN)


def test_session_equals_independent_calls(store, owner):
    add_comments(store, owner.owner_id, ["ugly duck", "ugh", "u g l y"])
    session = PreviewSession(store, owner.owner_id)
    for text in ("u", "ug", "ugl", "ugly"):
        via_session = session.preview(text, PLAIN)
        direct = preview_phrase(store, owner.owner_id, text, PLAIN)
        assert via_session == direct


def test_session_empty_text_raises(store, owner):
    session = PreviewSession(store, owner.owner_id)
    with pytest.raises(EmptyPhrase):
        session.preview("", PLAIN)


def test_caught_flags_ignore_candidate(store, owner):
    # the candidate itself must not mark comments as caught
    add_comments(store, owner.owner_id, ["kebab rules"])
    result = preview_phrase(store, owner.owner_id, "kebab", OPTS)
    assert result.matches[0].already_caught is False


def test_preview_against_brute_force(store, owner):
    texts = [
        "you are ugly",
        "so ugly and fat",
        "shiiit happens",
        "fine comment",
        "what a sh1t take",
        "uglyy looks",
    ]
    add_comments(store, owner.owner_id, texts)
    cat = catalog.create_category(store, owner.owner_id, "Cfg")
    catalog.add_phrase(store, owner.owner_id, cat.category_id, "fat", OPTS, MatchAction.REVIEW)

    candidate = "ugly"
    result = preview_phrase(store, owner.owner_id, candidate, OPTS)

    expected_matched = {
        f"cm{i:05d}" for i, t in enumerate(texts) if oracle_find_matches(candidate, t, spell_variants=True)
    }
    expected_caught = {
        f"cm{i:05d}" for i, t in enumerate(texts) if oracle_find_matches("fat", t, spell_variants=True)
    }
    assert {m.comment_id for m in result.matches} == expected_matched
    assert result.uncaught_count == len(expected_matched - expected_caught)
