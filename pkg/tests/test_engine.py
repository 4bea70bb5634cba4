import random

import pytest

import oracles
from tabletalk.catalog import INTEGER, INTEGER_CODE
from tabletalk.engine import (
    Distribution,
    Scalar,
    Series,
    Summary,
    describe_numeric,
    execute,
    trend_of,
)
from tabletalk.errors import (
    EmptyAfterFilter,
    EmptyColumn,
    NonNumericColumn,
    UnknownColumn,
)
from tabletalk.registry import Condition, bind
from tabletalk.tables import Column, Table


def run(registry_map, tables, catalog, command, bindings, conditions=()):
    bound = bind(registry_map[command], bindings, tuple(conditions))
    return execute(bound, tables, catalog)


def code_columns(catalog, tables, table_name):
    table = tables[table_name]
    return [
        cm.column
        for cm in catalog.columns_of(table_name)
        if cm.type == INTEGER_CODE and table.has_column(cm.column)
    ]


def test_most_of_atm_fixture(registry_map, tables, catalog):
    result, trace = run(
        registry_map, tables, catalog, "most_of",
        {"target_table": "characteristics", "target_column": "atm"},
    )
    assert result == Scalar(value=1, label="Normal", count=95, total=193)
    assert trace.rows_in == 200
    assert trace.rows_after_filter == 200
    assert trace.rows_dropped_na == 7


def test_distribution_sexe_fixture(registry_map, tables, catalog):
    result, _ = run(
        registry_map, tables, catalog, "distribution",
        {"target_table": "users", "target_column": "sexe"},
    )
    assert isinstance(result, Distribution)
    assert result.entries == ((1, "Male", 210), (2, "Feminine", 110))
    assert result.total == 320
    assert sum(n for _, _, n in result.entries) == result.total


def test_trend_fixture_decreasing(registry_map, tables, catalog):
    result, _ = run(
        registry_map, tables, catalog, "trend_by_year",
        {"target_table": "characteristics", "year_column": "an"},
    )
    assert isinstance(result, Series)
    assert result.points == ((2016, 60), (2017, 52), (2018, 46), (2019, 42))
    assert result.direction == "decreasing"


def test_trend_ols_hand_computed_case():
    # counts 120,110,100,95 over 2016-2019: slope -8.5 by hand
    direction, slope = trend_of([(2016, 120), (2017, 110), (2018, 100), (2019, 95)])
    assert slope == pytest.approx(-8.5)
    assert direction == "decreasing"
    assert trend_of([(2016, 100), (2017, 100)])[0] == "stable"
    assert trend_of([(2016, 10), (2017, 30)])[0] == "increasing"


def test_describe_textbook_values():
    table = Table("t", (Column("v", INTEGER, (2, 4, 4, 4, 5, 5, 7, 9)),))
    s = describe_numeric(table, "v")
    assert s == Summary(column="v", min=2, max=9, mean=5.0, median=4, std=2.0)


def test_describe_degenerate_single_value():
    table = Table("t", (Column("v", INTEGER, (3,)),))
    s = describe_numeric(table, "v")
    assert (s.min, s.max, s.mean, s.median, s.std) == (3, 3, 3.0, 3, 0.0)


def test_describe_fixture_matches_oracle(registry_map, tables, catalog):
    result, _ = run(
        registry_map, tables, catalog, "describe",
        {"target_table": "users", "target_column": "an_nais"},
    )
    ref = oracles.describe(list(tables["users"].rows()), "an_nais")
    assert (result.min, result.max, result.median) == (ref["min"], ref["max"], ref["median"])
    assert result.mean == pytest.approx(ref["mean"])
    assert result.std == pytest.approx(ref["std"])


def test_describe_rejects_code_and_missing_columns(registry_map, tables, catalog):
    with pytest.raises(NonNumericColumn):
        run(registry_map, tables, catalog, "describe",
            {"target_table": "characteristics", "target_column": "atm"})
    with pytest.raises(UnknownColumn):
        run(registry_map, tables, catalog, "describe",
            {"target_table": "characteristics", "target_column": "nope"})


def test_describe_empty_column():
    table = Table("t", (Column("v", INTEGER, (None, None)),))
    with pytest.raises(EmptyColumn):
        describe_numeric(table, "v")


def test_empty_after_filter(registry_map, tables, catalog):
    with pytest.raises(EmptyAfterFilter):
        run(registry_map, tables, catalog, "most_of",
            {"target_table": "characteristics", "target_column": "atm"},
            [Condition("an", "=", 1812)])


def test_count_with_conditions_matches_oracle(registry_map, tables, catalog):
    cases = [
        ("characteristics", [Condition("an", "=", 2019)]),
        ("characteristics", [Condition("an", ">", 2017)]),
        ("users", [Condition("catu", "=", 3)]),
        ("users", [Condition("sexe", "=", 2), Condition("catu", "=", 1)]),
        ("characteristics", [Condition("atm", "=", 3)]),
    ]
    for table_name, conds in cases:
        result, _ = run(registry_map, tables, catalog, "count",
                        {"target_table": table_name}, conds)
        ref = len(oracles.rows_matching(tables[table_name], conds))
        assert result.value == ref


def test_oracle_equivalence_exhaustive(registry_map, tables, catalog):
    """Every command against every applicable fixture column agrees with the
    nested-loop reference."""
    for table_name, table in tables.items():
        rows = list(table.rows())
        for column in code_columns(catalog, tables, table_name):
            counts = oracles.value_counts(rows, column)
            if not counts:
                continue
            result, _ = run(registry_map, tables, catalog, "most_of",
                            {"target_table": table_name, "target_column": column})
            assert result.value == oracles.mode(rows, column), (table_name, column)
            result, _ = run(registry_map, tables, catalog, "least_of",
                            {"target_table": table_name, "target_column": column})
            assert result.value == oracles.antimode(rows, column), (table_name, column)
            result, _ = run(registry_map, tables, catalog, "distribution",
                            {"target_table": table_name, "target_column": column})
            assert dict((c, n) for c, _, n in result.entries) == counts
            assert result.total == sum(counts.values())
            some_code = sorted(counts)[0]
            result, _ = run(registry_map, tables, catalog, "share",
                            {"target_table": table_name, "target_column": column,
                             "target_value": some_code})
            ref_count, ref_total = oracles.share(rows, column, some_code)
            assert (result.count, result.total) == (ref_count, ref_total)


def test_crosstab_matches_oracle_and_row_sums(registry_map, tables, catalog):
    pairs = [("users", "secu", "grav"), ("users", "sexe", "catu"), ("users", "catu", "grav")]
    for table_name, a, b in pairs:
        result, _ = run(registry_map, tables, catalog, "crosstab",
                        {"target_table": table_name, "a": a, "b": b})
        ref = oracles.crosstab(list(tables[table_name].rows()), a, b)
        got = {}
        for i, r in enumerate(result.row_codes):
            for j, c in enumerate(result.col_codes):
                if result.counts[i][j]:
                    got[(r, c)] = result.counts[i][j]
        assert got == ref
        # row sums equal the distribution of `a` restricted to rows where both present
        both = [row for row in tables[table_name].rows()
                if row[a] is not None and row[b] is not None]
        dist = oracles.value_counts(both, a)
        for i, r in enumerate(result.row_codes):
            assert sum(result.counts[i]) == dist[r]
        assert result.row_codes == tuple(sorted(result.row_codes))
        assert result.col_codes == tuple(sorted(result.col_codes))


def test_filter_then_count_consistency(registry_map, tables, catalog):
    conds = [Condition("an", "=", 2018)]
    count_result, _ = run(registry_map, tables, catalog, "count",
                          {"target_table": "characteristics"}, conds)
    dist_result, trace = run(registry_map, tables, catalog, "distribution",
                             {"target_table": "characteristics", "target_column": "atm"},
                             conds)
    assert count_result.value == dist_result.total + trace.rows_dropped_na


def test_mode_tie_break_smaller_code(registry_map, catalog):
    rng = random.Random(77)
    for _ in range(200):
        codes = rng.sample(range(1, 9), 2)
        n = rng.randint(2, 20)
        values = [codes[0]] * n + [codes[1]] * n
        filler = max(codes) + rng.randint(1, 3)
        values += [filler] * rng.randint(0, n - 1)
        rng.shuffle(values)
        table = Table("t", (Column("c", INTEGER, tuple(values)),))
        bound = bind(registry_map["most_of"], {"target_table": "t", "target_column": "c"})
        result, _ = execute(bound, {"t": table}, catalog)
        assert result.value == min(codes)
        bound = bind(registry_map["least_of"], {"target_table": "t", "target_column": "c"})
        result, _ = execute(bound, {"t": table}, catalog)
        expected = oracles.antimode([{"c": v} for v in values], "c")
        assert result.value == expected


def test_execution_deterministic(registry_map, tables, catalog):
    a = run(registry_map, tables, catalog, "most_of",
            {"target_table": "characteristics", "target_column": "atm"})
    b = run(registry_map, tables, catalog, "most_of",
            {"target_table": "characteristics", "target_column": "atm"})
    assert a[0] == b[0]
    assert a[1].as_text() == b[1].as_text()
