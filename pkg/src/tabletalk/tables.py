"""Load, clean, and join delimiter-separated datasets into immutable tables.

Cells are ``int`` (codes and numbers), ``str`` (text), or ``None`` (missing).
Declared NA codes and blank cells normalize to ``None`` at load; a table never
carries a live NA code after loading.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .catalog import INTEGER_CODE, TEXT, ColumnMeta, MetadataCatalog
from .errors import (
    EmptySource,
    TooManyRejectedRows,
    TypeViolation,
    UnknownColumn,
)

_DELIMITERS = (",", ";", "\t")
JOIN_KEY = "Num_Acc"


@dataclass(frozen=True)
class Column:
    name: str
    type: str
    values: tuple

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class LoadReport:
    data_lines: int
    rejected: tuple[tuple[int, str], ...] = ()
    delimiter: str = ","


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[Column, ...]
    report: LoadReport | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate column names in table {self.name!r}")
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise ValueError(f"ragged columns in table {self.name!r}: {lengths}")

    @property
    def row_count(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise UnknownColumn(f"no column {name!r} in table {self.name!r}")

    def has_column(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def row(self, i: int) -> dict:
        return {c.name: c.values[i] for c in self.columns}

    def rows(self):
        for i in range(self.row_count):
            yield self.row(i)

    def take(self, indices: list[int]) -> "Table":
        cols = tuple(
            Column(c.name, c.type, tuple(c.values[i] for i in indices)) for c in self.columns
        )
        return Table(self.name, cols)


def _detect_delimiter(header_line: str) -> str:
    """Pick the delimiter whose header split is consistent: most fields,
    all of them nonempty and unique. Comma wins ties."""
    best = ","
    best_fields = 0
    for delim in _DELIMITERS:
        fields = next(csv.reader([header_line], delimiter=delim))
        fields = [f.strip() for f in fields]
        if len(fields) > 1 and all(fields) and len(set(fields)) == len(fields):
            if len(fields) > best_fields:
                best_fields = len(fields)
                best = delim
    return best


def _convert_cell(
    raw: str, meta: ColumnMeta, codes: frozenset[int] | None
):
    """Returns the typed cell value; raises TypeViolation on bad content."""
    text = raw.strip()
    if text == "":
        return None
    if meta.type == TEXT:
        return text
    try:
        value = int(text)
    except ValueError:
        try:
            # tolerate "2019.0" style exports
            f = float(text)
        except ValueError:
            raise TypeViolation(
                f"non-numeric value {text!r} in integer column {meta.table}.{meta.column}"
            ) from None
        if not f.is_integer():
            raise TypeViolation(
                f"non-integer value {text!r} in integer column {meta.table}.{meta.column}"
            )
        value = int(f)
    if value in meta.na_codes:
        return None
    if meta.type == INTEGER_CODE and codes is not None and value not in codes:
        raise TypeViolation(
            f"code {value} not in codebook of {meta.table}.{meta.column}"
        )
    return value


def load_table(
    source,
    table_name: str,
    catalog: MetadataCatalog,
    *,
    delimiter: str | None = None,
    max_reject_fraction: float = 0.01,
    lenient: bool = False,
    allow_unknown_columns: bool = False,
) -> Table:
    """Parse a delimited text source into a typed, NA-normalized Table.

    Strict mode (default) raises TypeViolation on the first bad cell; lenient
    mode rejects the offending row instead. Rejected rows count against
    ``max_reject_fraction`` and are reported on ``table.report``.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8-sig")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise EmptySource(f"no header row for table {table_name!r}")

    delim = delimiter or _detect_delimiter(lines[0])
    reader = csv.reader(lines, delimiter=delim)
    header = [h.strip() for h in next(reader)]

    metas: list[ColumnMeta | None] = []
    for name in header:
        cm = catalog.get(table_name, name)
        if cm is None:
            if allow_unknown_columns:
                metas.append(None)
                continue
            raise UnknownColumn(f"header {name!r} not in catalog for table {table_name!r}")
        metas.append(cm)

    codebooks = {
        cm.key: frozenset(code for code, _ in cm.codebook)
        for cm in metas
        if cm is not None and cm.type == INTEGER_CODE and cm.codebook
    }

    kept: list[list] = [[] for _ in header]
    rejected: list[tuple[int, str]] = []
    data_lines = 0
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        data_lines += 1
        if len(row) != len(header):
            rejected.append((lineno, f"expected {len(header)} fields, got {len(row)}"))
            continue
        converted = []
        bad: str | None = None
        for raw, cm in zip(row, metas):
            if cm is None:
                converted.append(None)
                continue
            try:
                converted.append(_convert_cell(raw, cm, codebooks.get(cm.key)))
            except TypeViolation as exc:
                if lenient:
                    bad = str(exc)
                    break
                raise TypeViolation(f"line {lineno}: {exc}") from None
        if bad is not None:
            rejected.append((lineno, bad))
            continue
        for cell, bucket in zip(converted, kept):
            bucket.append(cell)

    if data_lines == 0:
        raise EmptySource(f"no data rows for table {table_name!r}")
    if len(rejected) > max_reject_fraction * data_lines:
        raise TooManyRejectedRows(
            f"{len(rejected)} of {data_lines} rows rejected in {table_name!r} "
            f"(cap {max_reject_fraction:.0%}); first: {rejected[0]}"
        )

    columns = tuple(
        Column(name, cm.type if cm is not None else TEXT, tuple(values))
        for name, cm, values in zip(header, metas, kept)
        if cm is not None
    )
    report = LoadReport(data_lines=data_lines, rejected=tuple(rejected), delimiter=delim)
    return Table(table_name, columns, report)


def drop_missing(table: Table, column: str) -> tuple[Table, int]:
    """New table keeping only rows where ``column`` is present."""
    col = table.column(column)
    keep = [i for i, v in enumerate(col.values) if v is not None]
    cleaned = table.take(keep)
    return cleaned, table.row_count - cleaned.row_count


def join_on_accident(left: Table, right: Table) -> Table:
    """Inner join on the shared accident id; left row order, right ties in
    right order; colliding right column names get a table-name prefix."""
    if not left.has_column(JOIN_KEY):
        raise UnknownColumn(f"table {left.name!r} has no {JOIN_KEY}")
    if not right.has_column(JOIN_KEY):
        raise UnknownColumn(f"table {right.name!r} has no {JOIN_KEY}")

    right_by_key: dict[int, list[int]] = {}
    for i, key in enumerate(right.column(JOIN_KEY).values):
        if key is None:
            continue
        right_by_key.setdefault(key, []).append(i)

    left_idx: list[int] = []
    right_idx: list[int] = []
    for i, key in enumerate(left.column(JOIN_KEY).values):
        if key is None:
            continue
        for j in right_by_key.get(key, ()):
            left_idx.append(i)
            right_idx.append(j)

    left_names = set(left.column_names)
    columns = [
        Column(c.name, c.type, tuple(c.values[i] for i in left_idx)) for c in left.columns
    ]
    for c in right.columns:
        name = f"{right.name}_{c.name}" if c.name in left_names else c.name
        columns.append(Column(name, c.type, tuple(c.values[j] for j in right_idx)))
    return Table(f"{left.name}_{right.name}", tuple(columns))


def load_tables_from_dir(directory, catalog: MetadataCatalog, **kwargs) -> dict[str, Table]:
    """Load every catalog table that has a ``<name>.csv`` in ``directory``."""
    from pathlib import Path

    out: dict[str, Table] = {}
    base = Path(directory)
    for name in catalog.table_names():
        path = base / f"{name}.csv"
        if path.exists():
            with path.open("rb") as fh:
                out[name] = load_table(fh, name, catalog, **kwargs)
    return out
