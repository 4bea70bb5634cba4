"""Naive nested-loop reference implementations.

Everything here recomputes results with plain loops over table rows,
independent of the execution engine's code paths. The engine must agree with
these on every fixture table.
"""

from __future__ import annotations

import math

from tabletalk.tables import Table


def rows_matching(table: Table, conditions) -> list[dict]:
    out = []
    for row in table.rows():
        keep = True
        for cond in conditions:
            v = row.get(cond.column)
            if v is None:
                keep = False
                break
            if cond.op == "=":
                keep = v == cond.value
            elif cond.op == "!=":
                keep = v != cond.value
            elif cond.op == "<":
                keep = v < cond.value
            elif cond.op == "<=":
                keep = v <= cond.value
            elif cond.op == ">":
                keep = v > cond.value
            elif cond.op == ">=":
                keep = v >= cond.value
            elif cond.op == "in":
                keep = v in cond.value
            if not keep:
                break
        if keep:
            out.append(row)
    return out


def value_counts(rows: list[dict], column: str) -> dict:
    counts: dict = {}
    for row in rows:
        v = row[column]
        if v is None:
            continue
        counts[v] = counts.get(v, 0) + 1
    return counts


def mode(rows: list[dict], column: str):
    counts = value_counts(rows, column)
    best = max(counts.values())
    return min(c for c, n in counts.items() if n == best)


def antimode(rows: list[dict], column: str):
    counts = value_counts(rows, column)
    worst = min(counts.values())
    return min(c for c, n in counts.items() if n == worst)


def share(rows: list[dict], column: str, value) -> tuple[int, int]:
    counts = value_counts(rows, column)
    return counts.get(value, 0), sum(counts.values())


def trend_slope(rows: list[dict], column: str) -> float:
    counts = value_counts(rows, column)
    points = sorted(counts.items())
    n = len(points)
    if n < 2:
        return 0.0
    sx = sum(x for x, _ in points)
    sy = sum(y for _, y in points)
    sxx = sum(x * x for x, _ in points)
    sxy = sum(x * y for x, y in points)
    denom = n * sxx - sx * sx
    if denom == 0:
        return 0.0
    return (n * sxy - sx * sy) / denom


def describe(rows: list[dict], column: str) -> dict:
    values = sorted(r[column] for r in rows if r[column] is not None)
    n = len(values)
    mean = sum(values) / n
    return {
        "min": values[0],
        "max": values[-1],
        "mean": mean,
        "median": values[(n - 1) // 2],
        "std": math.sqrt(sum((v - mean) ** 2 for v in values) / n),
    }


def crosstab(rows: list[dict], a: str, b: str) -> dict[tuple, int]:
    cells: dict[tuple, int] = {}
    for row in rows:
        x, y = row[a], row[b]
        if x is None or y is None:
            continue
        cells[(x, y)] = cells.get((x, y), 0) + 1
    return cells


def join_count(left: Table, right: Table) -> int:
    count = 0
    for lrow in left.rows():
        for rrow in right.rows():
            if lrow["Num_Acc"] is not None and lrow["Num_Acc"] == rrow["Num_Acc"]:
                count += 1
    return count
