"""HTTP API over the catalog, preview, analytics and ingestion modules.

Handlers only parse input, call the corresponding module operation, and
serialize its result; all semantics live in the modules. Login is a
stub that issues bearer tokens per owner name (the seam where real
platform OAuth would attach).
"""

from __future__ import annotations

import datetime as dt
import json

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import analytics, catalog, ingestion, preview
from .connector import Connector
from .errors import AuthError, BadRequest, ConnectorUnavailable, ModerationError
from .models import MatchAction, PhraseOptions
from .serialize import (
    builtin_view,
    category_view,
    comment_page_view,
    error_view,
    phrase_view,
    poll_outcome_view,
    preview_view,
    series_view,
)
from .store import Store


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    if not raw:
        raise BadRequest("request body required")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise BadRequest(f"body is not valid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise BadRequest("body must be a JSON object")
    return data


def _require_str(data: dict, key: str) -> str:
    value = data.get(key)
    if not isinstance(value, str):
        raise BadRequest(f"field {key!r} must be a string")
    return value


def _parse_bool(value: str | bool | None, name: str, default: bool = False) -> bool:
    if value is None or value == "":
        return default
    if isinstance(value, bool):
        return value
    if value in ("true", "1", "yes"):
        return True
    if value in ("false", "0", "no"):
        return False
    raise BadRequest(f"parameter {name!r} must be a boolean")


def _parse_int(value: str | None, name: str, default: int) -> int:
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError as exc:
        raise BadRequest(f"parameter {name!r} must be an integer") from exc


def _parse_options(data: dict) -> PhraseOptions:
    return PhraseOptions(
        case_sensitive=_parse_bool(data.get("case_sensitive"), "case_sensitive"),
        spell_variants=_parse_bool(data.get("spell_variants"), "spell_variants"),
        leet_variants=_parse_bool(data.get("leet_variants"), "leet_variants"),
    )


def _parse_action(data: dict, default: MatchAction | None = None) -> MatchAction:
    raw = data.get("action")
    if raw is None and default is not None:
        return default
    if not isinstance(raw, str) or raw not in {a.value for a in MatchAction}:
        raise BadRequest(f"field 'action' must be one of {sorted(a.value for a in MatchAction)}")
    return MatchAction(raw)


def _parse_window_end(value: str | None) -> dt.date | None:
    if not value:
        return None
    try:
        return dt.date.fromisoformat(value)
    except ValueError as exc:
        raise BadRequest("parameter 'window_end' must be YYYY-MM-DD") from exc


def build_api(
    store: Store,
    connector: Connector | None = None,
    default_timezone: str = "UTC",
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="modkit api")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    if static_dir:
        from starlette.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    @app.exception_handler(ModerationError)
    async def moderation_error_handler(_request, exc: ModerationError):
        return JSONResponse(error_view(exc), status_code=exc.http_status)

    def authed_owner(request: Request) -> str:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise AuthError("missing bearer token")
        owner_id = store.resolve_token(header[7:].strip())
        if owner_id is None:
            raise AuthError("invalid or expired token")
        return owner_id

    def need_connector() -> Connector:
        if connector is None:
            raise ConnectorUnavailable("no platform connector configured")
        return connector

    # -- auth ----------------------------------------------------------

    @app.post("/login", status_code=201)
    async def login(request: Request):
        body = await _json_body(request)
        name = _require_str(body, "owner_name").strip()
        if not name:
            raise BadRequest("owner_name is blank")
        owner = store.ensure_owner(name, timezone=default_timezone)
        with store.write():
            token, expires_at = store.insert_token(owner.owner_id)
        return {
            "token": token,
            "owner_id": owner.owner_id,
            "owner_name": owner.name,
            "expires_at": expires_at,
        }

    # -- categories ------------------------------------------------------

    @app.get("/categories")
    def list_categories(request: Request):
        owner_id = authed_owner(request)
        return [category_view(store, c) for c in catalog.list_categories(store, owner_id)]

    @app.post("/categories", status_code=201)
    async def create_category(request: Request):
        owner_id = authed_owner(request)
        body = await _json_body(request)
        category = catalog.create_category(store, owner_id, _require_str(body, "name"))
        return category_view(store, category)

    @app.get("/categories/{category_id}")
    def get_category(category_id: str, request: Request):
        owner_id = authed_owner(request)
        return category_view(store, catalog.get_category(store, owner_id, category_id))

    @app.patch("/categories/{category_id}")
    async def patch_category(category_id: str, request: Request):
        owner_id = authed_owner(request)
        body = await _json_body(request)
        if "name" in body:
            catalog.rename_category(store, owner_id, category_id, _require_str(body, "name"))
        if "shared" in body:
            catalog.set_category_shared(
                store, owner_id, category_id, _parse_bool(body.get("shared"), "shared")
            )
        return category_view(store, catalog.get_category(store, owner_id, category_id))

    @app.delete("/categories/{category_id}")
    def delete_category(category_id: str, request: Request):
        owner_id = authed_owner(request)
        catalog.delete_category(store, owner_id, category_id)
        return {"ok": True}

    # -- phrases -----------------------------------------------------------

    @app.post("/categories/{category_id}/phrases", status_code=201)
    async def add_phrase(category_id: str, request: Request):
        owner_id = authed_owner(request)
        body = await _json_body(request)
        phrase = catalog.add_phrase(
            store,
            owner_id,
            category_id,
            _require_str(body, "text"),
            _parse_options(body),
            _parse_action(body),
        )
        return phrase_view(phrase)

    @app.delete("/categories/{category_id}/phrases/{phrase_id}")
    def remove_phrase(category_id: str, phrase_id: str, request: Request):
        owner_id = authed_owner(request)
        catalog.remove_phrase(store, owner_id, category_id, phrase_id)
        return {"ok": True}

    @app.patch("/phrases/{phrase_id}")
    async def patch_phrase(phrase_id: str, request: Request):
        owner_id = authed_owner(request)
        body = await _json_body(request)
        current = store.get_phrase(phrase_id)
        options = None
        if any(k in body for k in ("case_sensitive", "spell_variants", "leet_variants")):
            base = current.options if current is not None else PhraseOptions()
            options = PhraseOptions(
                case_sensitive=_parse_bool(body.get("case_sensitive"), "case_sensitive", base.case_sensitive),
                spell_variants=_parse_bool(body.get("spell_variants"), "spell_variants", base.spell_variants),
                leet_variants=_parse_bool(body.get("leet_variants"), "leet_variants", base.leet_variants),
            )
        action = _parse_action(body) if "action" in body else None
        phrase = catalog.edit_phrase(store, owner_id, phrase_id, options=options, action=action)
        return phrase_view(phrase)

    # -- preview -------------------------------------------------------------

    @app.get("/preview")
    def get_preview(
        request: Request,
        text: str = "",
        case_sensitive: str = "",
        spell_variants: str = "",
        leet_variants: str = "",
    ):
        owner_id = authed_owner(request)
        options = PhraseOptions(
            case_sensitive=_parse_bool(case_sensitive, "case_sensitive"),
            spell_variants=_parse_bool(spell_variants, "spell_variants"),
            leet_variants=_parse_bool(leet_variants, "leet_variants"),
        )
        result = preview.preview_phrase(store, owner_id, text, options)
        return preview_view(store, result)

    # -- builtins, clone, portable docs ----------------------------------------

    @app.get("/builtins")
    def list_builtins(request: Request):
        authed_owner(request)
        return [builtin_view(b) for b in store.list_builtins()]

    @app.post("/builtins/{builtin_id}/import", status_code=201)
    def import_builtin(builtin_id: str, request: Request):
        owner_id = authed_owner(request)
        return category_view(store, catalog.import_builtin(store, owner_id, builtin_id))

    @app.post("/categories/{category_id}/clone", status_code=201)
    def clone_category(category_id: str, request: Request):
        owner_id = authed_owner(request)
        source = store.get_category(category_id)
        source_user = source.owner_id if source is not None else "unknown"
        category = catalog.clone_shared(store, owner_id, source_user, category_id)
        return category_view(store, category)

    @app.get("/categories/{category_id}/diff-upstream")
    def diff_upstream(category_id: str, request: Request):
        owner_id = authed_owner(request)
        return catalog.diff_upstream(store, owner_id, category_id)

    @app.get("/categories/{category_id}/export")
    def export_category(category_id: str, request: Request):
        owner_id = authed_owner(request)
        return catalog.export_category(store, owner_id, category_id).as_dict()

    @app.post("/categories/import", status_code=201)
    async def import_document(request: Request):
        owner_id = authed_owner(request)
        raw = await request.body()
        category = catalog.import_document(store, owner_id, raw)
        return category_view(store, category)

    # -- analytics ----------------------------------------------------------------

    @app.get("/analytics/categories")
    def analytics_categories(request: Request, window_end: str = ""):
        owner_id = authed_owner(request)
        series = analytics.category_series(store, owner_id, _parse_window_end(window_end))
        return [series_view(s) for s in series]

    @app.get("/analytics/categories/{category_id}/phrases")
    def analytics_phrases(category_id: str, request: Request, window_end: str = ""):
        owner_id = authed_owner(request)
        series = analytics.phrase_series(store, owner_id, category_id, _parse_window_end(window_end))
        return [series_view(s) for s in series]

    @app.get("/comments")
    def comments(
        request: Request,
        search: str = "",
        category_id: str = "",
        sort: str = "recency",
        page: str = "",
        page_size: str = "",
    ):
        owner_id = authed_owner(request)
        result = analytics.comment_table(
            store,
            owner_id,
            search_text=search or None,
            category_id=category_id or None,
            sort=sort,
            page=_parse_int(page, "page", 1),
            page_size=_parse_int(page_size, "page_size", 50),
        )
        return comment_page_view(result)

    # -- ingestion control ------------------------------------------------------------

    @app.post("/ingest/backfill")
    def ingest_backfill(request: Request):
        owner_id = authed_owner(request)
        count = ingestion.backfill(store, owner_id, need_connector())
        return {"ingested": count}

    @app.post("/ingest/poll")
    def ingest_poll(request: Request):
        owner_id = authed_owner(request)
        outcome = ingestion.poll_once(store, owner_id, need_connector())
        return poll_outcome_view(outcome)

    @app.post("/ingest/rescan")
    def ingest_rescan(request: Request):
        owner_id = authed_owner(request)
        return {"events_created": ingestion.rescan(store, owner_id)}

    return app
