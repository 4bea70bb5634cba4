"""Machine-readable catalog of tables and columns: descriptions, codebooks,
synonyms, NA codes. Used for query matching and for rendering answers.

Catalog file grammar (line-oriented, UTF-8, ``#`` comments ignored)::

    catalog-version: 1
    table: <name>
      describes: <free text>
      synonyms: <term> | <term> | ...
    column: <table>.<name>
      description: <free text>
      type: integer-code | integer | text
      na-codes: <int>, <int>, ...
      synonyms: <term> | <term> | ...
      code: <int> = <label>
      value-terms: <int> = <term> | <term> | ...

``synonyms`` are the query surface for the column; ``value-terms`` are extra
query phrases for one codebook value (the label itself always counts).
``serialize_catalog`` emits the canonical form; load/serialize round-trips.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from .errors import (
    CatalogParseError,
    CodebookNaOverlap,
    DuplicateColumn,
    SynonymCollision,
    UnknownColumn,
)
from .text import norm_phrase

INTEGER_CODE = "integer-code"
INTEGER = "integer"
TEXT = "text"
_TYPES = (INTEGER_CODE, INTEGER, TEXT)

DEFAULT_NA_CODES = frozenset({-1})


@dataclass(frozen=True)
class TableMeta:
    name: str
    description: str
    synonyms: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValueHit:
    meta: "ColumnMeta"
    code: int
    declared: bool


@dataclass(frozen=True, eq=True)
class ColumnMeta:
    table: str
    column: str
    description: str
    type: str
    codebook: tuple[tuple[int, str], ...] = ()
    synonyms: tuple[str, ...] = ()
    na_codes: frozenset[int] = DEFAULT_NA_CODES
    value_terms: tuple[tuple[int, tuple[str, ...]], ...] = ()

    def label_for(self, code: int) -> str | None:
        for c, label in self.codebook:
            if c == code:
                return label
        return None

    @property
    def key(self) -> tuple[str, str]:
        return (self.table, self.column)


class MetadataCatalog:
    """Validated, immutable catalog with prebuilt lexicon indexes."""

    def __init__(self, version: str, tables: list[TableMeta], columns: list[ColumnMeta]):
        self.version = version
        self.tables = tuple(tables)
        self.columns = tuple(columns)
        self._by_key: dict[tuple[str, str], ColumnMeta] = {}
        self._validate()
        self._build_indexes()

    # -- validation ---------------------------------------------------------

    def _validate(self) -> None:
        for cm in self.columns:
            if cm.type not in _TYPES:
                raise CatalogParseError(f"{cm.table}.{cm.column}: unknown type {cm.type!r}")
            if cm.key in self._by_key:
                raise DuplicateColumn(f"duplicate column {cm.table}.{cm.column}")
            self._by_key[cm.key] = cm
            codes = {c for c, _ in cm.codebook}
            overlap = codes & cm.na_codes
            if overlap:
                raise CodebookNaOverlap(
                    f"{cm.table}.{cm.column}: codes {sorted(overlap)} are both codebook and NA"
                )
        # a synonym term may name the same column in several tables (join keys)
        # but never two differently-named columns
        seen: dict[frozenset[str], str] = {}
        for cm in self.columns:
            for term in self._column_terms(cm):
                phrase = frozenset(norm_phrase(term))
                if not phrase:
                    continue
                prior = seen.get(phrase)
                if prior is not None and prior != cm.column:
                    raise SynonymCollision(
                        f"term {term!r} maps to both {prior} and "
                        f"{cm.table}.{cm.column}"
                    )
                seen[phrase] = cm.column

    @staticmethod
    def _column_terms(cm: ColumnMeta) -> list[str]:
        terms = [cm.column.lower()]
        terms.extend(s.lower() for s in cm.synonyms)
        return terms

    # -- indexes ------------------------------------------------------------

    def _build_indexes(self) -> None:
        self._term_index: dict[frozenset[str], list[ColumnMeta]] = {}
        self._exact_terms: dict[tuple[str, str], set[str]] = {}
        for cm in self.columns:
            raw = set(self._column_terms(cm))
            self._exact_terms[cm.key] = raw
            for term in sorted(raw):
                phrase = frozenset(norm_phrase(term))
                if phrase:
                    bucket = self._term_index.setdefault(phrase, [])
                    if cm not in bucket:
                        bucket.append(cm)
        # value phrases: codebook labels plus declared value-terms; declared
        # terms are flagged so ambiguity resolution can prefer a deliberate
        # catalog declaration over an incidental label homonym
        all_column_sets = {
            frozenset(norm_phrase(t))
            for cm in self.columns
            for t in self._column_terms(cm)
        }
        self._value_index: dict[frozenset[str], list[ValueHit]] = {}
        for cm in self.columns:
            per_code: dict[int, dict[str, bool]] = {}
            for code, label in cm.codebook:
                per_code.setdefault(code, {})[label.lower()] = False
            for code, terms in cm.value_terms:
                bucket = per_code.setdefault(code, {})
                for t in terms:
                    bucket[t.lower()] = True
            for code in sorted(per_code):
                for term in sorted(per_code[code]):
                    declared = per_code[code][term]
                    phrase = frozenset(norm_phrase(term))
                    if not phrase:
                        continue
                    if not declared and phrase in all_column_sets:
                        # an incidental label like "On the road" or "Belt"
                        # must not hijack a column query term; only a declared
                        # value term may coexist with one
                        continue
                    hits = self._value_index.setdefault(phrase, [])
                    existing = next(
                        (h for h in hits if h.meta is cm and h.code == code), None
                    )
                    if existing is None:
                        hits.append(ValueHit(cm, code, declared))
                    elif declared and not existing.declared:
                        hits[hits.index(existing)] = ValueHit(cm, code, True)
        self._table_terms: dict[frozenset[str], str] = {}
        for tm in self.tables:
            for term in (tm.name, *tm.synonyms):
                phrase = frozenset(norm_phrase(term))
                if phrase:
                    self._table_terms[phrase] = tm.name

    # -- lookups ------------------------------------------------------------

    def get(self, table: str, column: str) -> ColumnMeta | None:
        return self._by_key.get((table, column))

    def require(self, table: str, column: str) -> ColumnMeta:
        cm = self.get(table, column)
        if cm is None:
            raise UnknownColumn(f"no column {table}.{column} in catalog")
        return cm

    def table_names(self) -> list[str]:
        return [t.name for t in self.tables]

    def columns_of(self, table: str) -> list[ColumnMeta]:
        return [cm for cm in self.columns if cm.table == table]

    def table_for_term(self, phrase: frozenset[str]) -> str | None:
        return self._table_terms.get(phrase)

    def column_candidates(self, phrase: frozenset[str]) -> list[ColumnMeta]:
        return list(self._term_index.get(phrase, ()))

    def value_candidates(self, phrase: frozenset[str]) -> list[ValueHit]:
        return list(self._value_index.get(phrase, ()))

    def max_phrase_len(self) -> int:
        lengths = [len(p) for p in self._term_index]
        lengths += [len(p) for p in self._value_index]
        lengths += [len(p) for p in self._table_terms]
        return max(lengths, default=1)


def resolve_term(catalog: MetadataCatalog, term: str) -> list[tuple[ColumnMeta, float]]:
    """Rank catalog columns for a query term.

    Exact synonym (or column name) match scores 1.0; stem-normalized or
    prefix match scores 0.8. Ties break on (table, column).
    """
    tl = term.strip().lower()
    if not tl:
        return []
    scores: dict[tuple[str, str], float] = {}

    def offer(cm: ColumnMeta, score: float) -> None:
        if score > scores.get(cm.key, 0.0):
            scores[cm.key] = score

    phrase = frozenset(norm_phrase(tl))
    for cm in catalog.column_candidates(phrase):
        offer(cm, 1.0 if tl in catalog._exact_terms[cm.key] else 0.8)
    if " " not in tl and len(tl) >= 3:
        for cm in catalog.columns:
            if any(" " not in s and s.startswith(tl) for s in catalog._exact_terms[cm.key]):
                offer(cm, 0.8)
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))
    return [(catalog._by_key[key], score) for key, score in ranked]


def label_of(catalog: MetadataCatalog, table: str, column: str, code: int) -> str:
    cm = catalog.require(table, column)
    label = cm.label_for(code)
    return label if label is not None else str(code)


# -- parsing / serialization ------------------------------------------------


def _split_terms(value: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in value.split("|") if t.strip())


def _parse_int_list(value: str, lineno: int) -> frozenset[int]:
    out = set()
    for part in value.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.add(int(part))
        except ValueError:
            raise CatalogParseError(f"line {lineno}: bad integer {part!r}") from None
    return frozenset(out)


def _parse_code_line(value: str, lineno: int) -> tuple[int, str]:
    head, sep, label = value.partition("=")
    if not sep:
        raise CatalogParseError(f"line {lineno}: expected '<code> = <text>'")
    try:
        code = int(head.strip())
    except ValueError:
        raise CatalogParseError(f"line {lineno}: bad code {head.strip()!r}") from None
    return code, label.strip()


class _ColumnDraft:
    def __init__(self, table: str, column: str):
        self.table = table
        self.column = column
        self.description = ""
        self.type = INTEGER
        self.na_codes: frozenset[int] | None = None
        self.synonyms: tuple[str, ...] = ()
        self.codebook: list[tuple[int, str]] = []
        self.value_terms: list[tuple[int, tuple[str, ...]]] = []

    def build(self) -> ColumnMeta:
        na = self.na_codes if self.na_codes is not None else DEFAULT_NA_CODES
        return ColumnMeta(
            table=self.table,
            column=self.column,
            description=self.description,
            type=self.type,
            codebook=tuple(self.codebook),
            synonyms=self.synonyms,
            na_codes=na,
            value_terms=tuple(self.value_terms),
        )


def load_catalog(source: bytes | str | io.IOBase) -> MetadataCatalog:
    if isinstance(source, io.IOBase):
        data = source.read()
    else:
        data = source
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    version = ""
    tables: list[TableMeta] = []
    columns: list[ColumnMeta] = []
    cur_table: dict | None = None
    cur_col: _ColumnDraft | None = None

    def flush_table() -> None:
        nonlocal cur_table
        if cur_table is not None:
            tables.append(TableMeta(**cur_table))
            cur_table = None

    def flush_column() -> None:
        nonlocal cur_col
        if cur_col is not None:
            columns.append(cur_col.build())
            cur_col = None

    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise CatalogParseError(f"line {lineno}: expected 'key: value'")
        key = key.strip()
        value = value.strip()
        if key == "catalog-version":
            version = value
        elif key == "table":
            flush_column()
            flush_table()
            cur_table = {"name": value, "description": "", "synonyms": ()}
        elif key == "describes":
            if cur_table is None:
                raise CatalogParseError(f"line {lineno}: 'describes' outside a table record")
            cur_table["description"] = value
        elif key == "column":
            flush_column()
            flush_table()
            table, dot, column = value.partition(".")
            if not dot or not table or not column:
                raise CatalogParseError(f"line {lineno}: expected 'column: <table>.<name>'")
            cur_col = _ColumnDraft(table, column)
        elif key == "synonyms":
            if cur_col is not None:
                cur_col.synonyms = _split_terms(value)
            elif cur_table is not None:
                cur_table["synonyms"] = _split_terms(value)
            else:
                raise CatalogParseError(f"line {lineno}: 'synonyms' outside a record")
        elif key == "description":
            if cur_col is None:
                raise CatalogParseError(f"line {lineno}: 'description' outside a column record")
            cur_col.description = value
        elif key == "type":
            if cur_col is None:
                raise CatalogParseError(f"line {lineno}: 'type' outside a column record")
            if value not in _TYPES:
                raise CatalogParseError(f"line {lineno}: unknown type {value!r}")
            cur_col.type = value
        elif key == "na-codes":
            if cur_col is None:
                raise CatalogParseError(f"line {lineno}: 'na-codes' outside a column record")
            cur_col.na_codes = _parse_int_list(value, lineno)
        elif key == "code":
            if cur_col is None:
                raise CatalogParseError(f"line {lineno}: 'code' outside a column record")
            cur_col.codebook.append(_parse_code_line(value, lineno))
        elif key == "value-terms":
            if cur_col is None:
                raise CatalogParseError(f"line {lineno}: 'value-terms' outside a column record")
            code, terms = _parse_code_line(value, lineno)
            cur_col.value_terms.append((code, _split_terms(terms)))
        else:
            raise CatalogParseError(f"line {lineno}: unknown key {key!r}")

    flush_column()
    flush_table()
    if not version:
        raise CatalogParseError("missing catalog-version")
    return MetadataCatalog(version, tables, columns)


def serialize_catalog(catalog: MetadataCatalog) -> str:
    """Canonical, diff-friendly text form; inverse of load_catalog."""
    out = [f"catalog-version: {catalog.version}", ""]
    for tm in catalog.tables:
        out.append(f"table: {tm.name}")
        if tm.description:
            out.append(f"  describes: {tm.description}")
        if tm.synonyms:
            out.append(f"  synonyms: {' | '.join(tm.synonyms)}")
        out.append("")
    for cm in catalog.columns:
        out.append(f"column: {cm.table}.{cm.column}")
        if cm.description:
            out.append(f"  description: {cm.description}")
        out.append(f"  type: {cm.type}")
        if cm.na_codes != DEFAULT_NA_CODES:
            joined = ", ".join(str(c) for c in sorted(cm.na_codes))
            out.append(f"  na-codes: {joined}" if joined else "  na-codes:")
        if cm.synonyms:
            out.append(f"  synonyms: {' | '.join(cm.synonyms)}")
        for code, label in cm.codebook:
            out.append(f"  code: {code} = {label}")
        for code, terms in cm.value_terms:
            out.append(f"  value-terms: {code} = {' | '.join(terms)}")
        out.append("")
    return "\n".join(out).rstrip() + "\n"


def shipped_catalog() -> MetadataCatalog:
    """The catalog bundled with the package (data/catalog.txt)."""
    from importlib import resources

    text = resources.files("tabletalk.data").joinpath("catalog.txt").read_text("utf-8")
    return load_catalog(text)


def check_label_scan(catalog: MetadataCatalog) -> list[str]:
    """Build-time scan: no codebook label may resolve, at exact synonym
    strength, to a different column. Fuzzy (stem-tier) overlap is tolerated;
    condition extraction handles it through its uniqueness rule."""
    problems = []
    for cm in catalog.columns:
        for _, label in cm.codebook:
            hits = resolve_term(catalog, label)
            if hits and hits[0][1] >= 1.0 and hits[0][0].column != cm.column:
                problems.append(
                    f"label {label!r} of {cm.table}.{cm.column} resolves to "
                    f"{hits[0][0].table}.{hits[0][0].column}"
                )
    return problems
