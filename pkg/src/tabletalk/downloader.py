"""Optional HTTPS fetcher for the public yearly accident CSVs.

URLs are never hard-coded: a JSON config file maps table names to URLs.
Downloads land in a cache directory next to a ``.sha256`` sidecar; a cached
file whose checksum still matches its sidecar is not fetched again.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import requests

DEFAULT_TIMEOUT = 60


def load_url_config(path: str | Path) -> dict[str, str]:
    """Config format: {"tables": {"characteristics": "https://...", ...}}"""
    with Path(path).open("r", encoding="utf-8") as fh:
        data = json.load(fh)
    tables = data.get("tables", {})
    if not isinstance(tables, dict) or not tables:
        raise ValueError(f"{path}: expected a non-empty 'tables' mapping")
    return {str(k): str(v) for k, v in tables.items()}


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def fetch(url: str, dest: Path, timeout: int = DEFAULT_TIMEOUT) -> Path:
    """Download ``url`` to ``dest`` unless a checksummed copy already exists."""
    sidecar = dest.with_suffix(dest.suffix + ".sha256")
    if dest.exists() and sidecar.exists():
        if _sha256(dest) == sidecar.read_text().strip():
            return dest
    dest.parent.mkdir(parents=True, exist_ok=True)
    response = requests.get(url, timeout=timeout)
    response.raise_for_status()
    dest.write_bytes(response.content)
    sidecar.write_text(_sha256(dest))
    return dest


def fetch_tables(config_path: str | Path, cache_dir: str | Path) -> dict[str, Path]:
    """Fetch every configured table; returns table name -> local path."""
    urls = load_url_config(config_path)
    cache = Path(cache_dir)
    out: dict[str, Path] = {}
    for name, url in sorted(urls.items()):
        out[name] = fetch(url, cache / f"{name}.csv")
    return out
