from __future__ import annotations

from pathlib import Path

import pytest

from tabletalk.catalog import shipped_catalog
from tabletalk.registry import builtin_registry, registry_by_name
from tabletalk.tables import load_tables_from_dir

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
SCHEMAS = REPO_ROOT / "schemas"


@pytest.fixture(scope="session")
def catalog():
    return shipped_catalog()


@pytest.fixture(scope="session")
def tables(catalog):
    return load_tables_from_dir(FIXTURES, catalog)


@pytest.fixture(scope="session")
def registry():
    return builtin_registry()


@pytest.fixture(scope="session")
def registry_map(registry):
    return registry_by_name(registry)


@pytest.fixture()
def store(tmp_path):
    from tabletalk.sessions import SessionStore

    return SessionStore(tmp_path / "sessions.ndjson")


@pytest.fixture()
def deps(catalog, registry, tables, store):
    from tabletalk.dialogue import Dependencies

    return Dependencies(catalog, registry, tables, store)
