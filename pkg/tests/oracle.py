"""Brute-force reference matcher used to cross-check the pattern engine.

Implements the documented matching semantics by direct expansion search:
every offset of the text is scanned, atom by atom, collecting all
reachable end positions, then boundary checks pick the valid ones. No
regex machinery is shared with the production engine.
"""

from __future__ import annotations

from functools import lru_cache

# Independent copy of the substitution table (glyphs interchangeable).
LEET_GROUPS = [
    {"a", "4", "@"},
    {"e", "3"},
    {"i", "1", "!"},
    {"o", "0"},
    {"s", "5", "$"},
    {"t", "7"},
]

WS = "WS"  # marker atom: one-or-more whitespace characters


def _leet_group(ch: str) -> set[str] | None:
    low = ch.lower()
    for group in LEET_GROUPS:
        if low in group:
            return group
    return None


def _fold(text: str) -> str:
    # Per-character lowercasing; keeps offsets stable for the rare chars
    # whose lowercase form changes length.
    return "".join(c.lower() if len(c.lower()) == 1 else c for c in text)


def _build_atoms(phrase_text: str, case_sensitive: bool, spell_variants: bool, leet_variants: bool):
    """Atom list: (glyphset, repeatable) tuples or the WS marker."""
    tokens = phrase_text.strip().split()
    atoms: list = []
    for ti, token in enumerate(tokens):
        if ti > 0:
            atoms.append(WS)
        for ch in token:
            if not spell_variants:
                atoms.append(({ch}, False))
                continue
            glyphs = {ch}
            if leet_variants:
                group = _leet_group(ch)
                if group is not None:
                    if ch.isalpha():
                        glyphs = {ch} | {g for g in group if not g.isalpha()}
                    else:
                        glyphs = set(group)
            atoms.append((glyphs, ch.isalpha()))
    plural = spell_variants
    if not case_sensitive:
        atoms = [a if a == WS else ({_fold(g) for g in a[0]}, a[1]) for a in atoms]
    return atoms, plural


def _is_word_char(ch: str) -> bool:
    return ch.isalnum()


def _char_to_byte(text: str, offsets: list[tuple[int, int]]) -> list[tuple[int, int]]:
    sizes = [len(c.encode("utf-8")) for c in text]
    prefix = [0]
    for s in sizes:
        prefix.append(prefix[-1] + s)
    return [(prefix[a], prefix[b]) for a, b in offsets]


def oracle_find_matches(
    phrase_text: str,
    text: str,
    *,
    case_sensitive: bool = False,
    spell_variants: bool = False,
    leet_variants: bool = False,
) -> list[tuple[int, int]]:
    """Leftmost non-overlapping matches as byte spans, longest end wins."""
    atoms, plural = _build_atoms(phrase_text, case_sensitive, spell_variants, leet_variants)
    if not atoms:
        return []
    probe = text if case_sensitive else _fold(text)
    n = len(probe)
    suffixes = ("s", "es") if plural else ()

    @lru_cache(maxsize=None)
    def go(ai: int, pos: int) -> frozenset[int]:
        """End offsets of expansions of atoms[ai:] matching probe[pos:]."""
        if ai == len(atoms):
            ends = {pos}
            for suffix in suffixes:
                if probe[pos : pos + len(suffix)] == suffix:
                    ends.add(pos + len(suffix))
            return frozenset(ends)
        atom = atoms[ai]
        results: set[int] = set()
        if atom == WS:
            p = pos
            while p < n and probe[p].isspace():
                p += 1
                results |= go(ai + 1, p)
            return frozenset(results)
        glyphs, repeatable = atom
        p = pos
        while p < n and probe[p] in glyphs:
            p += 1
            results |= go(ai + 1, p)
            if not repeatable:
                break
        return frozenset(results)

    first_glyphs = atoms[0][0]  # first atom is never WS
    char_spans: list[tuple[int, int]] = []
    i = 0
    while i < n:
        if probe[i] not in first_glyphs:
            i += 1
            continue
        if i > 0 and _is_word_char(text[i - 1]):
            i += 1
            continue
        ends = go(0, i)
        valid = [
            e for e in ends if e > i and (e == n or not _is_word_char(text[e]))
        ]
        if valid:
            e = max(valid)
            char_spans.append((i, e))
            i = e
            continue
        i += 1
    go.cache_clear()
    return _char_to_byte(text, char_spans)


def oracle_matches(phrase_text: str, text: str, **options) -> bool:
    return bool(oracle_find_matches(phrase_text, text, **options))
