"""Execute a bound command against loaded tables.

Evaluation order is fixed: apply filter conditions, drop rows missing in the
command's target column(s), then compute. Every execution returns a typed
result plus a provenance trace (row counts and the bound semantic tree) that
serializes bit-identically for identical inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import INTEGER, MetadataCatalog
from .errors import (
    EmptyAfterFilter,
    EmptyColumn,
    NonNumericColumn,
    UnknownColumn,
    UnknownTable,
)
from .registry import BoundCommand, Condition
from .tables import Table

STABLE_SLOPE = 0.5  # |counts/year| below this reports a stable trend


@dataclass(frozen=True)
class Scalar:
    value: int | float
    label: str
    count: int | None = None
    total: int | None = None


@dataclass(frozen=True)
class Distribution:
    column: str
    entries: tuple[tuple[int | str, str, int], ...]  # (code, label, count)
    total: int


@dataclass(frozen=True)
class Series:
    points: tuple[tuple[int, int], ...]  # (year, count)
    direction: str  # increasing | decreasing | stable
    slope: float


@dataclass(frozen=True)
class Crosstab:
    row_column: str
    col_column: str
    row_codes: tuple[int, ...]
    col_codes: tuple[int, ...]
    counts: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]


@dataclass(frozen=True)
class Summary:
    column: str
    min: int
    max: int
    mean: float
    median: int
    std: float


@dataclass(frozen=True)
class Preview:
    table: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]


ResultValue = Scalar | Distribution | Series | Crosstab | Summary | Preview


@dataclass(frozen=True)
class ExecutionTrace:
    rows_in: int
    rows_after_filter: int
    rows_dropped_na: int
    ast: str

    def as_text(self) -> str:
        return (
            f"rows_in: {self.rows_in}\n"
            f"rows_after_filter: {self.rows_after_filter}\n"
            f"rows_dropped_na: {self.rows_dropped_na}\n"
            f"ast: {self.ast}"
        )


def _apply_conditions(table: Table, conditions: tuple[Condition, ...]) -> Table:
    if not conditions:
        return table
    cols = {}
    for cond in conditions:
        cols[cond.column] = table.column(cond.column).values  # UnknownColumn if absent
    keep = []
    for i in range(table.row_count):
        ok = True
        for cond in conditions:
            v = cols[cond.column][i]
            if v is None:
                ok = False
                break
            if not _holds(v, cond.op, cond.value):
                ok = False
                break
        if ok:
            keep.append(i)
    return table.take(keep)


def _holds(value, op: str, target) -> bool:
    if op == "=":
        return value == target
    if op == "!=":
        return value != target
    if op == "<":
        return value < target
    if op == "<=":
        return value <= target
    if op == ">":
        return value > target
    if op == ">=":
        return value >= target
    if op == "in":
        return value in target
    raise ValueError(f"unknown operator {op!r}")


def _value_counts(values) -> dict:
    counts: dict = {}
    for v in values:
        if v is None:
            continue
        counts[v] = counts.get(v, 0) + 1
    return counts


def _mode(counts: dict, smallest_wins_on_max: bool):
    """Modal (or antimodal) code; ties broken by the smaller code."""
    if smallest_wins_on_max:
        best = max(counts.values())
    else:
        best = min(counts.values())
    return min(code for code, n in counts.items() if n == best)


def _label(catalog: MetadataCatalog, table: str, column: str, code) -> str:
    if isinstance(code, int):
        cm = catalog.get(table, column)
        if cm is not None:
            label = cm.label_for(code)
            if label is not None:
                return label
    return str(code)


def describe_numeric(table: Table, column: str) -> Summary:
    """Exact min/max, float mean and population std, lower-middle median."""
    col = table.column(column)
    if col.type != INTEGER:
        raise NonNumericColumn(f"{table.name}.{column} is {col.type}, not numeric")
    values = sorted(v for v in col.values if v is not None)
    if not values:
        raise EmptyColumn(f"{table.name}.{column} has no values after NA drop")
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return Summary(
        column=column,
        min=values[0],
        max=values[-1],
        mean=mean,
        median=values[(n - 1) // 2],
        std=math.sqrt(var),
    )


def _ols_slope(points: list[tuple[int, int]]) -> float:
    n = len(points)
    if n < 2:
        return 0.0
    mx = sum(x for x, _ in points) / n
    my = sum(y for _, y in points) / n
    sxx = sum((x - mx) ** 2 for x, _ in points)
    if sxx == 0:
        return 0.0
    sxy = sum((x - mx) * (y - my) for x, y in points)
    return sxy / sxx


def trend_of(points: list[tuple[int, int]]) -> tuple[str, float]:
    slope = _ols_slope(points)
    if abs(slope) < STABLE_SLOPE:
        return "stable", slope
    return ("increasing" if slope > 0 else "decreasing"), slope


def execute(
    cmd: BoundCommand,
    tables: dict[str, Table],
    catalog: MetadataCatalog,
) -> tuple[ResultValue, ExecutionTrace]:
    spec = cmd.spec
    table_name = cmd.bindings.get("target_table")
    table = tables.get(table_name)
    if table is None:
        raise UnknownTable(f"table {table_name!r} is not loaded")

    rows_in = table.row_count
    filtered = _apply_conditions(table, cmd.conditions)
    rows_after_filter = filtered.row_count

    target_columns: list[str] = []
    if spec.name in ("most_of", "least_of", "distribution", "share", "describe"):
        target_columns = [cmd.bindings["target_column"]]
    elif spec.name == "trend_by_year":
        target_columns = [cmd.bindings["year_column"]]
    elif spec.name == "crosstab":
        target_columns = [cmd.bindings["a"], cmd.bindings["b"]]

    working = filtered
    for column in target_columns:
        working.column(column)  # raise UnknownColumn before dropping anything
    for column in target_columns:
        keep = [i for i, v in enumerate(working.column(column).values) if v is not None]
        working = working.take(keep)
    rows_dropped_na = rows_after_filter - working.row_count

    trace = ExecutionTrace(
        rows_in=rows_in,
        rows_after_filter=rows_after_filter,
        rows_dropped_na=rows_dropped_na,
        ast=cmd.bound_ast(),
    )

    needs_rows = spec.name not in ("count", "filter_preview")
    if needs_rows and working.row_count == 0:
        raise EmptyAfterFilter(f"{spec.name}: no rows left after filter and NA drop")

    result = _compute(spec.name, cmd, working, catalog)
    return result, trace


def _compute(name: str, cmd: BoundCommand, working: Table, catalog: MetadataCatalog) -> ResultValue:
    table_name = cmd.bindings["target_table"]

    if name in ("most_of", "least_of"):
        column = cmd.bindings["target_column"]
        counts = _value_counts(working.column(column).values)
        code = _mode(counts, smallest_wins_on_max=(name == "most_of"))
        return Scalar(
            value=code,
            label=_label(catalog, table_name, column, code),
            count=counts[code],
            total=sum(counts.values()),
        )

    if name == "count":
        n = working.row_count
        return Scalar(value=n, label=str(n), count=n)

    if name == "distribution":
        column = cmd.bindings["target_column"]
        counts = _value_counts(working.column(column).values)
        ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        entries = tuple(
            (code, _label(catalog, table_name, column, code), n) for code, n in ordered
        )
        return Distribution(column=column, entries=entries, total=sum(counts.values()))

    if name == "share":
        column = cmd.bindings["target_column"]
        value = cmd.bindings["target_value"]
        counts = _value_counts(working.column(column).values)
        total = sum(counts.values())
        count = counts.get(value, 0)
        return Scalar(
            value=value,
            label=_label(catalog, table_name, column, value),
            count=count,
            total=total,
        )

    if name == "trend_by_year":
        column = cmd.bindings["year_column"]
        counts = _value_counts(working.column(column).values)
        points = sorted(counts.items())
        direction, slope = trend_of(points)
        return Series(points=tuple(points), direction=direction, slope=slope)

    if name == "describe":
        return describe_numeric(working, cmd.bindings["target_column"])

    if name == "crosstab":
        a, b = cmd.bindings["a"], cmd.bindings["b"]
        va = working.column(a).values
        vb = working.column(b).values
        cells: dict[tuple, int] = {}
        for x, y in zip(va, vb):
            cells[(x, y)] = cells.get((x, y), 0) + 1
        row_codes = tuple(sorted({x for x, _ in cells}))
        col_codes = tuple(sorted({y for _, y in cells}))
        counts = tuple(
            tuple(cells.get((r, c), 0) for c in col_codes) for r in row_codes
        )
        return Crosstab(
            row_column=a,
            col_column=b,
            row_codes=row_codes,
            col_codes=col_codes,
            counts=counts,
            row_labels=tuple(_label(catalog, table_name, a, r) for r in row_codes),
            col_labels=tuple(_label(catalog, table_name, b, c) for c in col_codes),
        )

    if name == "filter_preview":
        limit = cmd.bindings["limit"]
        n = min(limit, working.row_count)
        names = tuple(working.column_names)
        rows = tuple(
            tuple(working.row(i)[c] for c in names) for i in range(n)
        )
        return Preview(table=table_name, columns=names, rows=rows)

    raise UnknownColumn(f"no executor for command {name!r}")


def result_shape(result: ResultValue) -> str:
    if isinstance(result, Scalar):
        return "scalar"
    if isinstance(result, Distribution):
        return "distribution"
    if isinstance(result, Series):
        return "series"
    if isinstance(result, Crosstab):
        return "crosstab"
    if isinstance(result, Summary):
        return "summary"
    return "preview"


def result_to_payload(result: ResultValue) -> dict:
    """JSON-ready representation, keyed by shape."""
    if isinstance(result, Scalar):
        return {
            "shape": "scalar",
            "value": result.value,
            "label": result.label,
            "count": result.count,
            "total": result.total,
        }
    if isinstance(result, Distribution):
        return {
            "shape": "distribution",
            "column": result.column,
            "entries": [
                {"code": c, "label": l, "count": n} for c, l, n in result.entries
            ],
            "total": result.total,
        }
    if isinstance(result, Series):
        return {
            "shape": "series",
            "points": [{"year": y, "count": n} for y, n in result.points],
            "direction": result.direction,
            "slope": result.slope,
        }
    if isinstance(result, Crosstab):
        return {
            "shape": "crosstab",
            "row_column": result.row_column,
            "col_column": result.col_column,
            "row_codes": list(result.row_codes),
            "col_codes": list(result.col_codes),
            "counts": [list(r) for r in result.counts],
            "row_labels": list(result.row_labels),
            "col_labels": list(result.col_labels),
        }
    if isinstance(result, Summary):
        return {
            "shape": "summary",
            "column": result.column,
            "min": result.min,
            "max": result.max,
            "mean": result.mean,
            "median": result.median,
            "std": result.std,
        }
    return {
        "shape": "preview",
        "table": result.table,
        "columns": list(result.columns),
        "rows": [list(r) for r in result.rows],
    }
