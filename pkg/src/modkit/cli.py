"""Operator command line.

Everything the service can do is drivable from here without the web UI:
running the API and mock platform, seeding corpora, backfill and
polling, category/phrase management, preview, analytics and offline
corpus evaluation. With --json, each command prints exactly one JSON
document on stdout.

Exit codes: 0 ok, 2 validation error, 3 connector unavailable, 4 store
error.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click

from . import analytics, catalog, ingestion, preview as preview_mod
from .api import build_api
from .config import Config, load_config
from .connector import HttpConnector
from .errors import ConnectorUnavailable, ModerationError, StoreError
from .mockplatform import MockPlatform, build_app as build_platform_app
from .models import MatchAction, PhraseOptions
from .portable import parse_document
from .scanning import compile_phrase_cached
from .serialize import (
    category_view,
    comment_page_view,
    phrase_view,
    poll_outcome_view,
    preview_view,
    series_view,
)
from .store import Store, open_store
from . import patterns

EXIT_VALIDATION = 2
EXIT_CONNECTOR = 3
EXIT_STORE = 4


class CliState:
    def __init__(self):
        self.config = Config()
        self.json_output = False

    def open_store(self) -> Store:
        store = open_store(self.config.store_path)
        catalog.load_builtin_seeds(store)
        return store

    def owner_id(self, store: Store, name: str) -> str:
        return store.ensure_owner(name, timezone=self.config.timezone).owner_id

    def connector(self) -> HttpConnector:
        if not self.config.connector_url:
            raise ConnectorUnavailable("no connector_url configured (flag, config file or MODKIT_CONNECTOR_URL)")
        return HttpConnector(base_url=self.config.connector_url)

    def emit(self, document, human=None) -> None:
        if self.json_output:
            click.echo(json.dumps(document, indent=2, ensure_ascii=False))
        elif human is not None:
            click.echo(human)
        else:
            click.echo(json.dumps(document, indent=2, ensure_ascii=False))


pass_state = click.make_pass_decorator(CliState, ensure=True)


def run_command(state: CliState, fn):
    try:
        fn()
    except ConnectorUnavailable as exc:
        click.echo(f"error: {exc.code}: {exc}", err=True)
        sys.exit(EXIT_CONNECTOR)
    except StoreError as exc:
        click.echo(f"error: {exc.code}: {exc}", err=True)
        sys.exit(EXIT_STORE)
    except ModerationError as exc:
        click.echo(f"error: {exc.code}: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="JSON config file.")
@click.option("--store", "store_path", default=None, help="Store file path (overrides config).")
@click.option("--connector-url", default=None, help="Platform connector base URL (overrides config).")
@click.option("--json", "json_output", is_flag=True, help="Machine-readable output: one JSON document on stdout.")
@pass_state
def main(state: CliState, config_path, store_path, connector_url, json_output):
    """Creator-led comment moderation service."""
    state.config = load_config(config_path)
    if store_path:
        state.config.store_path = store_path
    if connector_url:
        state.config.connector_url = connector_url
    state.json_output = json_output


def _options_from_flags(case_sensitive, spell_variants, leet_variants) -> PhraseOptions:
    return PhraseOptions(
        case_sensitive=case_sensitive, spell_variants=spell_variants, leet_variants=leet_variants
    )


# -- serve ----------------------------------------------------------------


@main.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--static-dir", default=None, help="Serve a built web UI from this directory at /ui.")
@pass_state
def serve(state: CliState, host, port, static_dir):
    """Run the HTTP API plus background pollers for known channels."""
    import uvicorn

    def go():
        store = state.open_store()
        connector = HttpConnector(base_url=state.config.connector_url) if state.config.connector_url else None
        app = build_api(store, connector, default_timezone=state.config.timezone, static_dir=static_dir)
        pollers = []
        if connector is not None:
            rows = store._read_conn().execute("SELECT owner_id FROM cursors").fetchall()
            for row in rows:
                poller = ingestion.Poller(
                    store, row["owner_id"], connector, interval=state.config.poll_interval
                ).start()
                pollers.append(poller)
        try:
            uvicorn.run(
                app,
                host=host or state.config.listen_host,
                port=port or state.config.listen_port,
                log_level="warning",
            )
        finally:
            for poller in pollers:
                poller.stop()
            store.close()

    run_command(state, go)


# -- mock platform ----------------------------------------------------------


@main.group("mock-platform")
def mock_platform():
    """Run or seed the offline stand-in for the video platform."""


@mock_platform.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=9090)
@click.option("--corpus", type=click.Path(exists=True), default=None, help="Seed from a corpus file at startup.")
def mock_platform_serve(host, port, corpus):
    import uvicorn

    platform = MockPlatform()
    if corpus:
        platform.seed_corpus(Path(corpus).read_text(encoding="utf-8"))
    uvicorn.run(build_platform_app(platform), host=host, port=port, log_level="warning")


@mock_platform.command("seed")
@click.option("--url", required=True, help="Base URL of a running mock platform.")
@click.option("--corpus", type=click.Path(exists=True), required=True)
@pass_state
def mock_platform_seed(state: CliState, url, corpus):
    import httpx

    def go():
        response = httpx.post(f"{url.rstrip('/')}/admin/seed", content=Path(corpus).read_bytes())
        if response.status_code != 200:
            raise ConnectorUnavailable(f"seed failed: HTTP {response.status_code} {response.text}")
        state.emit(response.json(), human=f"seeded {response.json()['count']} comments")

    run_command(state, go)


# -- ingestion ---------------------------------------------------------------


@main.command()
@click.option("--owner", required=True)
@pass_state
def backfill(state: CliState, owner):
    """Retrieve the full comment history (no actions executed)."""

    def go():
        store = state.open_store()
        try:
            count = ingestion.backfill(store, state.owner_id(store, owner), state.connector())
            state.emit({"ingested": count}, human=f"ingested {count} comments")
        finally:
            store.close()

    run_command(state, go)


@main.command()
@click.option("--owner", required=True)
@click.option("--once", is_flag=True, default=True, help="Poll a single time (the default).")
@pass_state
def poll(state: CliState, owner, once):
    """Fetch new comments, record match events, execute actions."""

    def go():
        store = state.open_store()
        try:
            outcome = ingestion.poll_once(store, state.owner_id(store, owner), state.connector())
            state.emit(
                poll_outcome_view(outcome),
                human=(
                    f"new_comments={outcome.new_comments} events_created={outcome.events_created}"
                    f" actions_applied={outcome.actions_applied}"
                ),
            )
        finally:
            store.close()

    run_command(state, go)


@main.command()
@click.option("--owner", required=True)
@pass_state
def rescan(state: CliState, owner):
    """Record audit events for historical comments (never acts on them)."""

    def go():
        store = state.open_store()
        try:
            created = ingestion.rescan(store, state.owner_id(store, owner))
            state.emit({"events_created": created}, human=f"created {created} events")
        finally:
            store.close()

    run_command(state, go)


# -- categories ----------------------------------------------------------------


@main.group()
def category():
    """Manage filter categories."""


@category.command("create")
@click.option("--owner", required=True)
@click.option("--name", required=True)
@pass_state
def category_create(state: CliState, owner, name):
    def go():
        store = state.open_store()
        try:
            cat = catalog.create_category(store, state.owner_id(store, owner), name)
            state.emit(category_view(store, cat), human=f"created {cat.category_id} {cat.name!r}")
        finally:
            store.close()

    run_command(state, go)


@category.command("list")
@click.option("--owner", required=True)
@pass_state
def category_list(state: CliState, owner):
    def go():
        store = state.open_store()
        try:
            cats = catalog.list_categories(store, state.owner_id(store, owner))
            human = "\n".join(
                f"{c.category_id}  {c.name}  ({len(c.phrase_refs)} phrases)" for c in cats
            ) or "(no categories)"
            state.emit([category_view(store, c) for c in cats], human=human)
        finally:
            store.close()

    run_command(state, go)


@category.command("export")
@click.option("--owner", required=True)
@click.option("--id", "category_id", required=True)
@click.option("--out", type=click.Path(), default=None, help="Write to a file instead of stdout.")
@pass_state
def category_export(state: CliState, owner, category_id, out):
    def go():
        store = state.open_store()
        try:
            doc = catalog.export_category(store, state.owner_id(store, owner), category_id)
            payload = doc.dumps()
            if out:
                Path(out).write_text(payload, encoding="utf-8")
                state.emit({"written": out}, human=f"wrote {out}")
            else:
                click.echo(payload, nl=False)
        finally:
            store.close()

    run_command(state, go)


@category.command("import")
@click.option("--owner", required=True)
@click.argument("file", type=click.Path(exists=True))
@pass_state
def category_import(state: CliState, owner, file):
    def go():
        store = state.open_store()
        try:
            cat = catalog.import_document(store, state.owner_id(store, owner), Path(file).read_bytes())
            state.emit(category_view(store, cat), human=f"imported {cat.category_id} {cat.name!r}")
        finally:
            store.close()

    run_command(state, go)


# -- phrases -----------------------------------------------------------------------


@main.group()
def phrase():
    """Manage phrases inside categories."""


@phrase.command("add")
@click.option("--owner", required=True)
@click.option("--category-id", required=True)
@click.option("--text", required=True)
@click.option("--case-sensitive", is_flag=True)
@click.option("--spell-variants", is_flag=True)
@click.option("--leet-variants", is_flag=True)
@click.option("--action", type=click.Choice([a.value for a in MatchAction]), default="monitor")
@pass_state
def phrase_add(state: CliState, owner, category_id, text, case_sensitive, spell_variants, leet_variants, action):
    def go():
        store = state.open_store()
        try:
            added = catalog.add_phrase(
                store,
                state.owner_id(store, owner),
                category_id,
                text,
                _options_from_flags(case_sensitive, spell_variants, leet_variants),
                MatchAction(action),
            )
            state.emit(phrase_view(added), human=f"added {added.phrase_id} {added.text!r}")
        finally:
            store.close()

    run_command(state, go)


@phrase.command("remove")
@click.option("--owner", required=True)
@click.option("--category-id", required=True)
@click.option("--phrase-id", required=True)
@pass_state
def phrase_remove(state: CliState, owner, category_id, phrase_id):
    def go():
        store = state.open_store()
        try:
            catalog.remove_phrase(store, state.owner_id(store, owner), category_id, phrase_id)
            state.emit({"ok": True}, human="removed")
        finally:
            store.close()

    run_command(state, go)


@phrase.command("set")
@click.option("--owner", required=True)
@click.option("--phrase-id", required=True)
@click.option("--case-sensitive/--no-case-sensitive", default=None)
@click.option("--spell-variants/--no-spell-variants", default=None)
@click.option("--leet-variants/--no-leet-variants", default=None)
@click.option("--action", type=click.Choice([a.value for a in MatchAction]), default=None)
@pass_state
def phrase_set(state: CliState, owner, phrase_id, case_sensitive, spell_variants, leet_variants, action):
    def go():
        store = state.open_store()
        try:
            current = store.get_phrase(phrase_id)
            options = None
            if current is not None and any(
                v is not None for v in (case_sensitive, spell_variants, leet_variants)
            ):
                options = PhraseOptions(
                    case_sensitive=current.options.case_sensitive if case_sensitive is None else case_sensitive,
                    spell_variants=current.options.spell_variants if spell_variants is None else spell_variants,
                    leet_variants=current.options.leet_variants if leet_variants is None else leet_variants,
                )
            updated = catalog.edit_phrase(
                store,
                state.owner_id(store, owner),
                phrase_id,
                options=options,
                action=MatchAction(action) if action else None,
            )
            state.emit(phrase_view(updated), human=f"updated {updated.phrase_id}")
        finally:
            store.close()

    run_command(state, go)


# -- preview -------------------------------------------------------------------------


@main.command()
@click.option("--owner", required=True)
@click.option("--text", required=True)
@click.option("--case-sensitive", is_flag=True)
@click.option("--spell-variants", is_flag=True)
@click.option("--leet-variants", is_flag=True)
@pass_state
def preview(state: CliState, owner, text, case_sensitive, spell_variants, leet_variants):
    """Show which stored comments a candidate phrase would catch."""

    def go():
        store = state.open_store()
        try:
            result = preview_mod.preview_phrase(
                store,
                state.owner_id(store, owner),
                text,
                _options_from_flags(case_sensitive, spell_variants, leet_variants),
            )
            view = preview_view(store, result)
            lines = [f"uncaught_count: {view['uncaught_count']} (of {view['total_matched']} matched)"]
            for match in view["matches"]:
                flag = " " if match["already_caught"] else "*"
                lines.append(f"{flag} [{match['comment_id']}] {match['text']}")
            state.emit(view, human="\n".join(lines))
        finally:
            store.close()

    run_command(state, go)


# -- analytics ------------------------------------------------------------------------


def _series_table(series_views: list[dict]) -> str:
    if not series_views:
        return "(no series)"
    lines = []
    for view in series_views:
        lines.append(f"{view['label']} (total {view['total']})")
        for bucket in view["buckets"]:
            if bucket["count"]:
                lines.append(f"  {bucket['day']}  {bucket['count']}")
    return "\n".join(lines)


def _series_csv(series_views: list[dict]) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["day"] + [v["label"] for v in series_views])
    if series_views:
        days = [b["day"] for b in series_views[0]["buckets"]]
        for i, day in enumerate(days):
            writer.writerow([day] + [v["buckets"][i]["count"] for v in series_views])
    return out.getvalue()


@main.command("analytics")
@click.option("--owner", required=True)
@click.option("--category", "category_id", default=None, help="Per-phrase series for one category.")
@click.option("--overview", is_flag=True, help="Per-category series (the default).")
@click.option("--window-end", default=None, help="Last day of the 30-day window, YYYY-MM-DD.")
@click.option("--csv", "csv_path", type=click.Path(), default=None, help="Also write chart data as CSV.")
@pass_state
def analytics_cmd(state: CliState, owner, category_id, overview, window_end, csv_path):
    """Print 30-day match counts as a table; emit chart data as CSV."""
    import datetime as dt

    def go():
        store = state.open_store()
        try:
            oid = state.owner_id(store, owner)
            end = dt.date.fromisoformat(window_end) if window_end else None
            if category_id:
                series = analytics.phrase_series(store, oid, category_id, end)
            else:
                series = analytics.category_series(store, oid, end)
            views = [series_view(s) for s in series]
            if csv_path:
                Path(csv_path).write_text(_series_csv(views), encoding="utf-8")
            state.emit(views, human=_series_table(views))
        finally:
            store.close()

    run_command(state, go)


@main.command()
@click.option("--owner", required=True)
@click.option("--search", default=None)
@click.option("--category-id", default=None)
@click.option("--sort", type=click.Choice(list(analytics.SORT_KEYS)), default="recency")
@click.option("--page", type=int, default=1)
@click.option("--page-size", type=int, default=50)
@pass_state
def comments(state: CliState, owner, search, category_id, sort, page, page_size):
    """Paginated comment table with category attribution."""

    def go():
        store = state.open_store()
        try:
            result = analytics.comment_table(
                store,
                state.owner_id(store, owner),
                search_text=search,
                category_id=category_id,
                sort=sort,
                page=page,
                page_size=page_size,
            )
            view = comment_page_view(result)
            lines = [f"total: {view['total']} (page {view['page']})"]
            for row in view["items"]:
                caught = ", ".join(row["caught_by"]) or "-"
                lines.append(
                    f"[{row['comment']['comment_id']}] {row['comment']['status']:<16} {caught:<24}"
                    f" {row['comment']['text']}"
                )
            state.emit(view, human="\n".join(lines))
        finally:
            store.close()

    run_command(state, go)


# -- offline evaluation -------------------------------------------------------------------


@main.command("eval")
@click.option("--corpus", type=click.Path(exists=True), required=True, help="JSONL comment corpus.")
@click.option(
    "--config",
    "config_files",
    type=click.Path(exists=True),
    multiple=True,
    required=True,
    help="Portable category document(s) to evaluate (repeatable).",
)
@pass_state
def eval_cmd(state: CliState, corpus, config_files):
    """Offline corpus scan: per-phrase match counts and uncaught stats."""

    def go():
        platform = MockPlatform()
        platform.seed_corpus(Path(corpus).read_text(encoding="utf-8"))
        texts = [(c.comment_id, c.text) for c in platform.comments.values()]

        documents = [parse_document(Path(f).read_text(encoding="utf-8")) for f in config_files]
        compiled = []
        for doc in documents:
            for rule in doc.rules:
                compiled.append((doc.name, rule, compile_phrase_cached(rule.text, rule.options)))

        per_phrase: dict[str, int] = {}
        caught_ids: set[str] = set()
        for comment_id, text in texts:
            for doc_name, rule, pattern in compiled:
                if patterns.matches(pattern, text):
                    per_phrase[f"{doc_name}/{rule.text}"] = per_phrase.get(f"{doc_name}/{rule.text}", 0) + 1
                    caught_ids.add(comment_id)

        report = {
            "comments": len(texts),
            "caught": len(caught_ids),
            "uncaught": len(texts) - len(caught_ids),
            "per_phrase": dict(sorted(per_phrase.items(), key=lambda kv: (-kv[1], kv[0]))),
        }
        human_lines = [
            f"comments: {report['comments']}",
            f"caught:   {report['caught']}",
            f"uncaught: {report['uncaught']}",
        ]
        for key, count in report["per_phrase"].items():
            human_lines.append(f"  {count:6d}  {key}")
        state.emit(report, human="\n".join(human_lines))

    run_command(state, go)


if __name__ == "__main__":
    main()
