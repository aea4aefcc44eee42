"""Runtime configuration: QGEN_CONFIG file, client endpoint, extensions."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SchemaError
from .files import load_extension
from .taxonomy import Taxonomy

CONFIG_ENV = "QGEN_CONFIG"
API_KEY_ENV = "QGEN_API_KEY"


@dataclass(frozen=True)
class ClientConfig:
    endpoint: str | None = None
    profile: str = "generic"
    model: str | None = None
    timeout: float = 30.0
    max_retries: int = 3


@dataclass(frozen=True)
class AppConfig:
    client: ClientConfig = field(default_factory=ClientConfig)
    extension_path: str | None = None
    banks_dir: str = "banks"


def load_config(path: str | Path | None = None) -> AppConfig:
    """Load config from an explicit path or $QGEN_CONFIG; defaults otherwise."""
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if path is None:
        return AppConfig()
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SchemaError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config file: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise SchemaError("config file: expected an object")
    client_doc = doc.get("client", {})
    if not isinstance(client_doc, dict):
        raise SchemaError("config file: 'client' must be an object")
    client = ClientConfig(
        endpoint=client_doc.get("endpoint"),
        profile=client_doc.get("profile", "generic"),
        model=client_doc.get("model"),
        timeout=float(client_doc.get("timeout", 30.0)),
        max_retries=int(client_doc.get("max_retries", 3)),
    )
    return AppConfig(
        client=client,
        extension_path=doc.get("extension"),
        banks_dir=doc.get("banks_dir", "banks"),
    )


def load_taxonomy(config: AppConfig) -> Taxonomy:
    """Taxonomy with the configured extension document applied, if any."""
    extension = load_extension(config.extension_path) if config.extension_path else None
    return Taxonomy.load(extension)
