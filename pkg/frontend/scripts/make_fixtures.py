#!/usr/bin/env python3
"""Regenerate tests/fixtures/api.json from a real seeded API instance.

The UI passthrough test asserts the DOM mirrors these exact responses,
so the fixture must come from the service itself, not be hand-written.
Run from the frontend directory: python3 scripts/make_fixtures.py
"""

import json
import pathlib
import tempfile

from starlette.testclient import TestClient

from modkit import catalog
from modkit.api import build_api
from modkit.connector import HttpConnector
from modkit.mockplatform import MockPlatform, build_app as build_platform_app
from modkit.store import open_store

CORPUS = [
    ("hater", "you are so uggly wow"),
    ("fan", "great kebab recipe!"),
    ("troll", "this is shiiit honestly"),
    ("meanie", "ugly AND fat, çok kötü"),
    ("viewer", "love the spices"),
]


def main() -> None:
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "api.json"
    out.parent.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        store = open_store(pathlib.Path(tmp) / "fixture.db")
        catalog.load_builtin_seeds(store)
        platform = MockPlatform()
        platform.seed_corpus(
            "\n".join(
                json.dumps(
                    {
                        "video_id": "v1",
                        "author_name": author,
                        "text": text,
                        "published_at": f"2024-03-0{i + 1}T10:00:00+00:00",
                    }
                )
                for i, (author, text) in enumerate(CORPUS)
            )
        )
        connector = HttpConnector(client=TestClient(build_platform_app(platform)))
        api = TestClient(build_api(store, connector))

        token = api.post("/login", json={"owner_name": "fixture"}).json()["token"]
        headers = {"Authorization": f"Bearer {token}"}
        api.post("/ingest/backfill", headers=headers)
        cat = api.post("/categories", json={"name": "Appearance"}, headers=headers).json()
        api.post(
            f"/categories/{cat['category_id']}/phrases",
            json={"text": "fat", "spell_variants": True, "action": "review"},
            headers=headers,
        )
        api.post("/ingest/rescan", headers=headers)

        fixture = {
            "series": api.get("/analytics/categories", headers=headers).json(),
            "comments": api.get("/comments", headers=headers).json(),
            "preview": api.get(
                "/preview", params={"text": "ugly", "spell_variants": "true"}, headers=headers
            ).json(),
            "builtins": api.get("/builtins", headers=headers).json(),
        }
        out.write_text(json.dumps(fixture, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        store.close()
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
