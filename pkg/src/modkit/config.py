"""Service configuration: defaults < config file < environment."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import FormatError

ENV_PREFIX = "MODKIT_"


@dataclass
class Config:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    store_path: str = "modkit.db"
    connector_url: str | None = None
    poll_interval: float = 60.0
    timezone: str = "UTC"


def load_config(path: str | Path | None = None, env: dict | None = None) -> Config:
    env = os.environ if env is None else env
    config = Config()
    if path is None and env.get(ENV_PREFIX + "CONFIG"):
        path = env[ENV_PREFIX + "CONFIG"]
    if path is not None:
        raw = Path(path).read_text(encoding="utf-8")
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise FormatError(f"config file is not valid JSON: {exc.msg}", line=exc.lineno) from exc
        known = {f.name for f in fields(Config)}
        unknown = set(data) - known
        if unknown:
            raise FormatError(f"unknown config keys: {sorted(unknown)}")
        for key, value in data.items():
            setattr(config, key, value)
    if env.get(ENV_PREFIX + "STORE"):
        config.store_path = env[ENV_PREFIX + "STORE"]
    if env.get(ENV_PREFIX + "CONNECTOR_URL"):
        config.connector_url = env[ENV_PREFIX + "CONNECTOR_URL"]
    if env.get(ENV_PREFIX + "LISTEN"):
        listen = env[ENV_PREFIX + "LISTEN"]
        host, _, port = listen.rpartition(":")
        config.listen_host = host or listen
        if port.isdigit():
            config.listen_port = int(port)
    if env.get(ENV_PREFIX + "POLL_INTERVAL"):
        config.poll_interval = float(env[ENV_PREFIX + "POLL_INTERVAL"])
    if env.get(ENV_PREFIX + "TIMEZONE"):
        config.timezone = env[ENV_PREFIX + "TIMEZONE"]
    return config
