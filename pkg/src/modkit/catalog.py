"""Phrase and category management.

Phrases have per-owner shared identity: one (owner, text) pair is a
single entity no matter how many categories reference it, so editing its
options or action is visible everywhere at once. Built-in templates and
user-shared categories are imported by deep copy; the copy records a
snapshot of the upstream rule texts so later drift can be surfaced as
suggestions without ever auto-applying anything.
"""

from __future__ import annotations

import importlib.resources
from pathlib import Path

from . import patterns
from .errors import (
    AlreadyInCategory,
    BuiltinNotFound,
    CategoryNotFound,
    DuplicateName,
    EmptyName,
    NotDerived,
    NotLinked,
    NotShared,
    OwnerNotFound,
    PhraseNotFound,
    SourceNotFound,
    UpstreamGone,
)
from .models import (
    BuiltinCategory,
    BuiltinRule,
    Category,
    MatchAction,
    Phrase,
    PhraseOptions,
    Provenance,
    ProvenanceKind,
)
from .portable import PortableDocument, PortableRule, parse_document
from .store import Store, snapshot_texts


def _owned_category(store: Store, owner_id: str, category_id: str) -> Category:
    category = store.get_category(category_id)
    if category is None or category.owner_id != owner_id:
        raise CategoryNotFound(f"no category {category_id} for this owner")
    return category


def create_category(store: Store, owner_id: str, name: str) -> Category:
    name = name.strip()
    if not name:
        raise EmptyName("category name is blank")
    with store.write():
        if store.category_by_name(owner_id, name) is not None:
            raise DuplicateName(f"category name {name!r} already exists")
        category = store.insert_category(owner_id, name, Provenance.scratch())
        store.bump_config_generation(owner_id)
        return category


def add_phrase(
    store: Store,
    owner_id: str,
    category_id: str,
    text: str,
    options: PhraseOptions,
    action: MatchAction,
) -> Phrase:
    """Add a phrase to a category.

    If the owner already has a phrase with this exact text it is linked
    into the category and its options/action are updated to the given
    values; every other category referencing it sees the change.
    """
    with store.write():
        _owned_category(store, owner_id, category_id)
        compiled = patterns.compile_phrase(text, options)
        canonical = compiled.source_phrase_text
        phrase = store.phrase_by_text(owner_id, canonical)
        if phrase is not None:
            if store.is_linked(category_id, phrase.phrase_id):
                raise AlreadyInCategory(f"phrase {canonical!r} already in category")
            store.update_phrase(phrase.phrase_id, options, action)
            phrase.options = options
            phrase.action = action
        else:
            phrase = store.insert_phrase(owner_id, canonical, options, action)
        store.link_phrase(category_id, phrase.phrase_id)
        store.bump_category_version(category_id)
        store.bump_config_generation(owner_id)
        return phrase


def remove_phrase(store: Store, owner_id: str, category_id: str, phrase_id: str) -> None:
    """Unlink a phrase; the entity (and its audit events) go away with
    its last link."""
    with store.write():
        _owned_category(store, owner_id, category_id)
        if not store.unlink_phrase(category_id, phrase_id):
            raise NotLinked(f"phrase {phrase_id} is not in category {category_id}")
        if store.phrase_link_count(phrase_id) == 0:
            store.delete_phrase(phrase_id)
        store.bump_category_version(category_id)
        store.bump_config_generation(owner_id)


def edit_phrase(
    store: Store,
    owner_id: str,
    phrase_id: str,
    options: PhraseOptions | None = None,
    action: MatchAction | None = None,
) -> Phrase:
    with store.write():
        phrase = store.get_phrase(phrase_id)
        if phrase is None or phrase.owner_id != owner_id:
            raise PhraseNotFound(f"no phrase {phrase_id} for this owner")
        new_options = options if options is not None else phrase.options
        new_action = action if action is not None else phrase.action
        patterns.compile_phrase(phrase.text, new_options)
        store.update_phrase(phrase_id, new_options, new_action)
        store.bump_config_generation(owner_id)
        phrase.options = new_options
        phrase.action = new_action
        return phrase


def delete_category(store: Store, owner_id: str, category_id: str) -> None:
    with store.write():
        _owned_category(store, owner_id, category_id)
        store.delete_category(category_id)
        store.bump_config_generation(owner_id)


def set_category_shared(store: Store, owner_id: str, category_id: str, shared: bool) -> Category:
    with store.write():
        category = _owned_category(store, owner_id, category_id)
        store.set_shared(category_id, shared)
        category.shared = shared
        return category


def rename_category(store: Store, owner_id: str, category_id: str, name: str) -> Category:
    name = name.strip()
    if not name:
        raise EmptyName("category name is blank")
    with store.write():
        category = _owned_category(store, owner_id, category_id)
        existing = store.category_by_name(owner_id, name)
        if existing is not None and existing.category_id != category_id:
            raise DuplicateName(f"category name {name!r} already exists")
        store.rename_category(category_id, name)
        category.name = name
        return category


def get_category(store: Store, owner_id: str, category_id: str) -> Category:
    return _owned_category(store, owner_id, category_id)


def list_categories(store: Store, owner_id: str) -> list[Category]:
    return store.list_categories(owner_id)


def phrases_in_category(store: Store, owner_id: str, category_id: str) -> list[Phrase]:
    category = _owned_category(store, owner_id, category_id)
    return [store.get_phrase(pid) for pid in category.phrase_refs]


def _free_name(store: Store, owner_id: str, base: str) -> str:
    if store.category_by_name(owner_id, base) is None:
        return base
    n = 2
    while store.category_by_name(owner_id, f"{base} ({n})") is not None:
        n += 1
    return f"{base} ({n})"


def _copy_rules_into(
    store: Store, owner_id: str, category: Category, rules: list[PortableRule] | list[BuiltinRule]
) -> None:
    for rule in rules:
        compiled = patterns.compile_phrase(rule.text, rule.options)
        canonical = compiled.source_phrase_text
        phrase = store.phrase_by_text(owner_id, canonical)
        if phrase is None:
            phrase = store.insert_phrase(owner_id, canonical, rule.options, rule.action)
        else:
            store.update_phrase(phrase.phrase_id, rule.options, rule.action)
        if not store.is_linked(category.category_id, phrase.phrase_id):
            store.link_phrase(category.category_id, phrase.phrase_id)


def import_builtin(store: Store, owner_id: str, builtin_id: str) -> Category:
    """Copy a built-in template into an owner-local category the owner
    can customize freely; the builtin itself is never mutated."""
    with store.write():
        builtin = store.get_builtin(builtin_id)
        if builtin is None:
            raise BuiltinNotFound(f"no builtin {builtin_id}")
        name = _free_name(store, owner_id, builtin.name)
        category = store.insert_category(
            owner_id,
            name,
            Provenance.builtin(builtin_id, builtin.version),
            snapshot_texts=[r.text for r in builtin.rules],
        )
        _copy_rules_into(store, owner_id, category, builtin.rules)
        store.increment_import_count(builtin_id)
        store.bump_config_generation(owner_id)
        return store.get_category(category.category_id)


def clone_shared(store: Store, owner_id: str, source_user_id: str, source_category_id: str) -> Category:
    """Copy another user's shared category, keeping texts, options and
    actions exactly as the sharer configured them."""
    with store.write():
        source = store.get_category(source_category_id)
        if source is None or source.owner_id != source_user_id:
            raise SourceNotFound(f"no category {source_category_id} shared by {source_user_id}")
        if not source.shared:
            raise NotShared(f"category {source_category_id} is not shared")
        source_phrases = [store.get_phrase(pid) for pid in source.phrase_refs]
        name = _free_name(store, owner_id, source.name)
        category = store.insert_category(
            owner_id,
            name,
            Provenance.cloned(source_user_id, source_category_id, source.version),
            snapshot_texts=[p.text for p in source_phrases],
        )
        rules = [PortableRule(text=p.text, options=p.options, action=p.action) for p in source_phrases]
        _copy_rules_into(store, owner_id, category, rules)
        store.bump_config_generation(owner_id)
        return store.get_category(category.category_id)


def diff_upstream(store: Store, owner_id: str, category_id: str) -> dict[str, list[str]]:
    """Rule texts the upstream gained/lost since this copy was taken.

    Pure suggestion: nothing is applied to the local category.
    """
    category = _owned_category(store, owner_id, category_id)
    if category.provenance.kind == ProvenanceKind.SCRATCH:
        raise NotDerived("category was made from scratch")
    snapshot = snapshot_texts(store, category_id) or []
    if category.provenance.kind == ProvenanceKind.BUILTIN:
        builtin = store.get_builtin(category.provenance.source_id)
        if builtin is None:
            raise UpstreamGone(f"builtin {category.provenance.source_id} no longer exists")
        upstream = [r.text for r in builtin.rules]
    else:
        source = store.get_category(category.provenance.source_id)
        if source is None or source.owner_id != category.provenance.source_user_id:
            raise UpstreamGone(f"source category {category.provenance.source_id} no longer exists")
        upstream = [store.get_phrase(pid).text for pid in source.phrase_refs]
    return {
        "added": sorted(set(upstream) - set(snapshot)),
        "removed": sorted(set(snapshot) - set(upstream)),
    }


def export_category(store: Store, owner_id: str, category_id: str) -> PortableDocument:
    category = _owned_category(store, owner_id, category_id)
    owner = store.get_owner(owner_id)
    if owner is None:
        raise OwnerNotFound(owner_id)
    rules = [
        PortableRule(text=p.text, options=p.options, action=p.action)
        for p in (store.get_phrase(pid) for pid in category.phrase_refs)
    ]
    return PortableDocument(name=category.name, description="", authors=owner.name, rules=rules)


def import_document(store: Store, owner_id: str, raw: str | bytes) -> Category:
    """Import a portable document as a new scratch-provenance category."""
    doc = parse_document(raw)
    with store.write():
        name = _free_name(store, owner_id, doc.name)
        category = store.insert_category(owner_id, name, Provenance.scratch())
        _copy_rules_into(store, owner_id, category, doc.rules)
        store.bump_config_generation(owner_id)
        return store.get_category(category.category_id)


def update_builtin_rules(store: Store, builtin_id: str, rules: list[BuiltinRule]) -> BuiltinCategory:
    """Administrative: replace a builtin's rule list, bumping its version."""
    with store.write():
        if store.get_builtin(builtin_id) is None:
            raise BuiltinNotFound(f"no builtin {builtin_id}")
        store.update_builtin_rules(builtin_id, rules)
        return store.get_builtin(builtin_id)


def builtin_seed_dir() -> Path:
    return Path(importlib.resources.files("modkit")) / "data" / "builtins"


def load_builtin_seeds(store: Store, seed_dir: Path | None = None) -> int:
    """Load builtin templates from portable-format files.

    Existing builtins are left untouched so import counts and versions
    survive restarts. Returns the number of builtins newly loaded.
    """
    directory = Path(seed_dir) if seed_dir is not None else builtin_seed_dir()
    loaded = 0
    with store.write():
        for path in sorted(directory.glob("*.json")):
            builtin_id = path.stem
            if store.get_builtin(builtin_id) is not None:
                continue
            doc = parse_document(path.read_text(encoding="utf-8"))
            store.upsert_builtin(
                BuiltinCategory(
                    builtin_id=builtin_id,
                    name=doc.name,
                    description=doc.description,
                    authors=doc.authors,
                    rules=[BuiltinRule(text=r.text, options=r.options, action=r.action) for r in doc.rules],
                    example_rules=[r.text for r in doc.rules[:3]],
                    import_count=0,
                    version=1,
                )
            )
            loaded += 1
    return loaded
