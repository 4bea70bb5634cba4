import pytest

import oracles
from conftest import FIXTURES
from tabletalk.catalog import load_catalog
from tabletalk.errors import (
    EmptySource,
    TooManyRejectedRows,
    TypeViolation,
    UnknownColumn,
)
from tabletalk.tables import Column, Table, drop_missing, join_on_accident, load_table

CAT = load_catalog(
    """\
catalog-version: 1
column: characteristics.Num_Acc
  type: integer
  na-codes:
column: characteristics.an
  type: integer
  na-codes:
column: characteristics.mois
  type: integer
  na-codes:
column: characteristics.atm
  type: integer-code
  code: 1 = Normal
  code: 2 = Light rain
column: characteristics.adr
  type: text
"""
)


def test_load_basic_header_row():
    table = load_table("Num_Acc,an,mois\n201900000001,2019,4\n", "characteristics", CAT)
    assert table.row_count == 1
    assert table.column("an").values == (2019,)
    assert table.column("Num_Acc").values == (201900000001,)


def test_na_code_normalized_to_missing():
    table = load_table("Num_Acc,atm\n1,-1\n2,1\n", "characteristics", CAT)
    assert table.column("atm").values == (None, 1)


def test_blank_cell_is_missing():
    table = load_table("Num_Acc,an,adr\n1,,\n", "characteristics", CAT)
    assert table.column("an").values == (None,)
    assert table.column("adr").values == (None,)


def test_missing_distinct_from_zero_and_minus_one():
    table = load_table("Num_Acc,an\n1,0\n2,-1\n3,\n", "characteristics", CAT)
    assert table.column("an").values == (0, -1, None)


def test_delimiter_autodetect_semicolon_and_tab():
    semi = load_table("Num_Acc;an\n1;2019\n", "characteristics", CAT)
    assert semi.report.delimiter == ";"
    tab = load_table("Num_Acc\tan\n1\t2019\n", "characteristics", CAT)
    assert tab.report.delimiter == "\t"
    assert semi.column("an").values == tab.column("an").values == (2019,)


def test_unknown_header_rejected():
    with pytest.raises(UnknownColumn):
        load_table("Num_Acc,mystery\n1,2\n", "characteristics", CAT)


def test_unknown_header_skipped_when_allowed():
    table = load_table(
        "Num_Acc,mystery,an\n1,x,2019\n", "characteristics", CAT, allow_unknown_columns=True
    )
    assert table.column_names == ["Num_Acc", "an"]
    assert table.column("an").values == (2019,)


def test_type_violation_strict():
    with pytest.raises(TypeViolation):
        load_table("Num_Acc,an\n1,notayear\n", "characteristics", CAT)


def test_unknown_code_is_type_violation():
    with pytest.raises(TypeViolation):
        load_table("Num_Acc,atm\n1,9\n", "characteristics", CAT)


def test_lenient_rejects_rows_and_caps():
    source = "Num_Acc,an\n" + "\n".join(f"{i},2019" for i in range(98)) + "\n98,bad\n99,2019\n"
    table = load_table(source, "characteristics", CAT, lenient=True)
    assert table.row_count == 99
    assert len(table.report.rejected) == 1
    with pytest.raises(TooManyRejectedRows):
        load_table("Num_Acc,an\n1,bad\n2,2019\n", "characteristics", CAT, lenient=True)


def test_wrong_field_count_rejected_and_reported():
    source = "Num_Acc,an\n" + "\n".join(f"{i},2019" for i in range(200)) + "\n1,2,3\n"
    table = load_table(source, "characteristics", CAT)
    assert table.row_count == 200
    assert table.report.rejected == ((202, "expected 2 fields, got 3"),)
    assert table.report.data_lines == 201
    assert table.row_count == table.report.data_lines - len(table.report.rejected)


def test_empty_source():
    with pytest.raises(EmptySource):
        load_table("", "characteristics", CAT)
    with pytest.raises(EmptySource):
        load_table("Num_Acc,an\n", "characteristics", CAT)


def test_fixture_characteristics_row_count(catalog, tables):
    raw = (FIXTURES / "characteristics.csv").read_text().strip().splitlines()
    assert len(raw) - 1 == 200  # independent line count
    table = tables["characteristics"]
    assert table.row_count == 200
    assert table.report.rejected == ()


def test_fixture_no_live_na_codes(catalog, tables):
    for name, table in tables.items():
        for cm in catalog.columns_of(name):
            if not table.has_column(cm.column):
                continue
            live = set(v for v in table.column(cm.column).values if v is not None)
            assert not (live & cm.na_codes), f"{name}.{cm.column} kept NA codes"


def test_hrmn_loads_as_text_preserving_leading_zeros(tables):
    values = tables["characteristics"].column("hrmn").values
    assert all(isinstance(v, str) and len(v) == 4 for v in values if v is not None)
    assert any(v.startswith("0") for v in values if v is not None)


def test_drop_missing_counts_and_idempotence(tables):
    table = tables["characteristics"]
    cleaned, removed = drop_missing(table, "atm")
    assert removed == 7
    assert cleaned.row_count == 193
    again, removed_again = drop_missing(cleaned, "atm")
    assert removed_again == 0
    assert again.columns == cleaned.columns


def test_drop_missing_no_op_on_full_column(tables):
    table = tables["characteristics"]
    cleaned, removed = drop_missing(table, "an")
    assert removed == 0
    assert cleaned.columns == table.columns


def test_drop_missing_unknown_column(tables):
    with pytest.raises(UnknownColumn):
        drop_missing(tables["characteristics"], "nope")


def _mini_table(name, **cols):
    first = next(iter(cols.values()))
    return Table(
        name,
        tuple(Column(k, "integer", tuple(v)) for k, v in cols.items()),
    )


def test_join_single_key_intersection():
    left = _mini_table("l", Num_Acc=[1, 2])
    right = _mini_table("r", Num_Acc=[2, 3], catv=[7, 7])
    joined = join_on_accident(left, right)
    assert joined.row_count == 1
    assert joined.column("Num_Acc").values == (2,)
    assert joined.column("catv").values == (7,)


def test_join_one_to_many_expansion():
    left = _mini_table("l", Num_Acc=[1])
    right = _mini_table("r", Num_Acc=[1, 1], catu=[1, 2])
    joined = join_on_accident(left, right)
    assert joined.row_count == 2
    assert joined.column("catu").values == (1, 2)


def test_join_renames_collisions_with_table_prefix():
    left = _mini_table("l", Num_Acc=[1], shared=[5])
    right = _mini_table("r", Num_Acc=[1], shared=[6])
    joined = join_on_accident(left, right)
    assert joined.column("shared").values == (5,)
    assert joined.column("r_shared").values == (6,)


def test_join_requires_key():
    with pytest.raises(UnknownColumn):
        join_on_accident(_mini_table("l", x=[1]), _mini_table("r", Num_Acc=[1]))


def test_join_matches_nested_loop_oracle(tables):
    pairs = [("characteristics", "places"), ("characteristics", "users"),
             ("characteristics", "vehicles"), ("users", "vehicles")]
    for lname, rname in pairs:
        joined = join_on_accident(tables[lname], tables[rname])
        assert joined.row_count == oracles.join_count(tables[lname], tables[rname])
