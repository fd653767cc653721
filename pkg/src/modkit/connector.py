"""Narrow client interface to the comment platform.

Ingestion only ever talks to these four calls, so a real platform client
can replace the HTTP mock without touching the pipeline. 5xx and
transport failures surface as ConnectorUnavailable (retryable); 4xx on
action calls surface as ActionRejected (recorded, not retried).
"""

from __future__ import annotations

from datetime import datetime, timezone

import httpx

from .errors import ConnectorUnavailable, ModerationError


class ActionRejected(ModerationError):
    code = "ActionRejected"


def parse_timestamp(value: str | float | int) -> float:
    """ISO 8601 (or epoch seconds) to epoch seconds."""
    if isinstance(value, (int, float)):
        return float(value)
    text = value.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.timestamp()


class Connector:
    """Interface; see HttpConnector for the wire implementation."""

    def list_comments(self, cursor: str | None, limit: int) -> tuple[list[dict], str, str]:
        raise NotImplementedError

    def delete_comment(self, comment_id: str) -> None:
        raise NotImplementedError

    def hold_comment(self, comment_id: str) -> None:
        raise NotImplementedError

    def block_user(self, author_id: str) -> None:
        raise NotImplementedError


class HttpConnector(Connector):
    def __init__(self, base_url: str | None = None, client: httpx.Client | None = None):
        if client is not None:
            self._client = client
        elif base_url:
            self._client = httpx.Client(base_url=base_url, timeout=10.0)
        else:
            raise ValueError("HttpConnector needs a base_url or a client")

    def close(self) -> None:
        self._client.close()

    def _request(self, method: str, path: str, **kwargs) -> httpx.Response:
        try:
            response = self._client.request(method, path, **kwargs)
        except httpx.HTTPError as exc:
            raise ConnectorUnavailable(f"{method} {path}: {exc}") from exc
        if response.status_code >= 500:
            raise ConnectorUnavailable(f"{method} {path}: HTTP {response.status_code}")
        return response

    def list_comments(self, cursor: str | None, limit: int) -> tuple[list[dict], str, str]:
        response = self._request(
            "GET", "/comments", params={"cursor": cursor or "", "limit": limit}
        )
        if response.status_code != 200:
            raise ConnectorUnavailable(f"list_comments: HTTP {response.status_code}")
        body = response.json()
        return body["comments"], body["next_cursor"], body.get("channel_id", "")

    def _action(self, method: str, path: str) -> None:
        response = self._request(method, path)
        if response.status_code >= 400:
            raise ActionRejected(f"{method} {path}: HTTP {response.status_code}")

    def delete_comment(self, comment_id: str) -> None:
        self._action("DELETE", f"/comments/{comment_id}")

    def hold_comment(self, comment_id: str) -> None:
        self._action("POST", f"/comments/{comment_id}/hold")

    def block_user(self, author_id: str) -> None:
        self._action("POST", f"/users/{author_id}/block")
