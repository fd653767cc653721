"""Portable category documents: the file format for sharing filter lists.

A document carries a category's rules together with their matching
options and actions, so an export followed by an import on another
account reproduces the category exactly.

Schema (format_version 1, UTF-8 JSON, all keys required, unknown keys
rejected)::

    {
      "format_version": 1,
      "name": str,
      "description": str,
      "authors": str,
      "rules": [
        {"text": str, "case_sensitive": bool, "spell_variants": bool,
         "leet_variants": bool, "action": "monitor"|"review"|"delete"|"block"}
      ]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import FormatError
from .models import MatchAction, PhraseOptions

FORMAT_VERSION = 1

_TOP_KEYS = {"format_version", "name", "description", "authors", "rules"}
_RULE_KEYS = {"text", "case_sensitive", "spell_variants", "leet_variants", "action"}
_ACTIONS = {a.value for a in MatchAction}


@dataclass
class PortableRule:
    text: str
    options: PhraseOptions
    action: MatchAction

    def as_dict(self) -> dict:
        return {
            "text": self.text,
            "case_sensitive": self.options.case_sensitive,
            "spell_variants": self.options.spell_variants,
            "leet_variants": self.options.leet_variants,
            "action": self.action.value,
        }


@dataclass
class PortableDocument:
    name: str
    description: str
    authors: str
    rules: list[PortableRule]

    def as_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "name": self.name,
            "description": self.description,
            "authors": self.authors,
            "rules": [r.as_dict() for r in self.rules],
        }

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"


def _require(condition: bool, message: str, field: str | None = None) -> None:
    if not condition:
        raise FormatError(message, field=field)


def parse_rule(item: object, field: str) -> PortableRule:
    _require(isinstance(item, dict), "rule must be an object", field)
    unknown = set(item) - _RULE_KEYS
    _require(not unknown, f"unknown keys: {sorted(unknown)}", field)
    missing = _RULE_KEYS - set(item)
    _require(not missing, f"missing keys: {sorted(missing)}", field)
    _require(isinstance(item["text"], str) and item["text"].strip() != "", "text must be a non-empty string", f"{field}.text")
    for key in ("case_sensitive", "spell_variants", "leet_variants"):
        _require(isinstance(item[key], bool), f"{key} must be a boolean", f"{field}.{key}")
    _require(
        isinstance(item["action"], str) and item["action"] in _ACTIONS,
        f"action must be one of {sorted(_ACTIONS)}",
        f"{field}.action",
    )
    if item["leet_variants"] and not item["spell_variants"]:
        raise FormatError("leet_variants requires spell_variants", field=f"{field}.leet_variants")
    return PortableRule(
        text=item["text"].strip(),
        options=PhraseOptions(
            case_sensitive=item["case_sensitive"],
            spell_variants=item["spell_variants"],
            leet_variants=item["leet_variants"],
        ),
        action=MatchAction(item["action"]),
    )


def parse_document(raw: str | bytes) -> PortableDocument:
    """Parse and validate a portable document; raises FormatError with
    line/field diagnostics on any deviation from the schema."""
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"document is not valid UTF-8: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc

    _require(isinstance(data, dict), "document must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    _require(not unknown, f"unknown keys: {sorted(unknown)}")
    missing = _TOP_KEYS - set(data)
    _require(not missing, f"missing keys: {sorted(missing)}")
    _require(
        data["format_version"] == FORMAT_VERSION,
        f"unsupported format_version {data['format_version']!r} (expected {FORMAT_VERSION})",
        "format_version",
    )
    _require(isinstance(data["name"], str) and data["name"].strip() != "", "name must be a non-empty string", "name")
    _require(isinstance(data["description"], str), "description must be a string", "description")
    _require(isinstance(data["authors"], str), "authors must be a string", "authors")
    _require(isinstance(data["rules"], list), "rules must be an array", "rules")

    rules = [parse_rule(item, f"rules[{i}]") for i, item in enumerate(data["rules"])]
    texts = [r.text for r in rules]
    if len(set(texts)) != len(texts):
        dupes = sorted({t for t in texts if texts.count(t) > 1})
        raise FormatError(f"duplicate rule texts: {dupes}", field="rules")
    return PortableDocument(
        name=data["name"].strip(),
        description=data["description"],
        authors=data["authors"],
        rules=rules,
    )
