"""The closed algebra of exploration commands.

Each command carries semantic slots, a semantic tree, a trace table mapping
slot names to tree paths, trigger phrases for the matcher, and an answer
template for the generator. The registry is code-defined and validated at
build: every trace path must resolve, slot entries must address parameter
nodes, and trigger phrases must be disjoint across commands.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import semtree
from .errors import InvalidTracePath, KindMismatch, MissingSlot
from .semtree import Call, ColumnSelect, CommandDef, Param, Path, Return

TABLE = "table"
COLUMN = "column"
VALUE = "value"
COLUMN_PAIR = "column-pair"
_KINDS = (TABLE, COLUMN, VALUE, COLUMN_PAIR)

SCALAR = "scalar"
DISTRIBUTION = "distribution"
SERIES = "series"
CROSSTAB = "crosstab"
SUMMARY = "summary"
PREVIEW = "preview"


@dataclass(frozen=True)
class SlotSpec:
    name: str
    kind: str
    default: int | str | None = None


@dataclass(frozen=True)
class CommandSpec:
    name: str
    slots: tuple[SlotSpec, ...]
    tree: CommandDef
    trace: tuple[tuple[str, Path], ...]
    triggers: frozenset[str]
    answer_template: str
    result_shape: str

    def slot(self, name: str) -> SlotSpec | None:
        for s in self.slots:
            if s.name == name:
                return s
        return None

    def trace_path(self, entry: str) -> Path:
        for name, path in self.trace:
            if name == entry:
                return path
        raise InvalidTracePath(f"{self.name}: no trace entry {entry!r}")

    def param_for_slot(self, slot: str) -> str:
        node = semtree.node_at(self.tree, self.trace_path(slot))
        if not isinstance(node, Param):
            raise InvalidTracePath(f"{self.name}: slot {slot!r} does not address a param")
        return node.name


@dataclass(frozen=True)
class Condition:
    column: str
    op: str  # = != < <= > >= in
    value: int


@dataclass(frozen=True)
class BoundCommand:
    spec: CommandSpec
    bindings: dict = field(default_factory=dict)
    conditions: tuple[Condition, ...] = ()

    def bound_ast(self) -> str:
        subs = {self.spec.param_for_slot(name): value for name, value in self.bindings.items()}
        return semtree.serialize_bound(self.spec.tree, subs)


def bind(spec: CommandSpec, bindings: dict, conditions: tuple[Condition, ...] = ()) -> BoundCommand:
    """Check completeness and slot kinds, then wrap into an executable plan."""
    declared = {s.name for s in spec.slots}
    unknown = set(bindings) - declared
    if unknown:
        raise KindMismatch(f"{spec.name}: unknown slots {sorted(unknown)}")
    missing = [s.name for s in spec.slots if s.name not in bindings]
    if missing:
        raise MissingSlot(missing)
    for s in spec.slots:
        value = bindings[s.name]
        if s.kind in (TABLE, COLUMN) and not isinstance(value, str):
            raise KindMismatch(f"{spec.name}: slot {s.name!r} needs an identifier, got {value!r}")
        if s.kind == VALUE and not isinstance(value, int):
            raise KindMismatch(f"{spec.name}: slot {s.name!r} needs a value, got {value!r}")
    return BoundCommand(spec, dict(bindings), tuple(conditions))


def _col_tree(name: str, method: str, wrap: str | None = None) -> CommandDef:
    inner = Call(method, ColumnSelect("x", "y"))
    body = Call(wrap, inner) if wrap else inner
    return CommandDef(name, ("x", "y"), Return(body))


def builtin_registry() -> list[CommandSpec]:
    specs = [
        CommandSpec(
            name="most_of",
            slots=(SlotSpec("target_table", TABLE), SlotSpec("target_column", COLUMN)),
            tree=_col_tree("most_of", "value_counts", "argmax_key"),
            trace=(
                ("target_table", (0, 0, 0, 0, 0)),
                ("target_column", (0, 0, 0, 0, 1)),
                ("aggregation", (0, 0)),
            ),
            triggers=frozenset({
                "most", "most accidents", "highest", "higher frequency", "most common",
                "most frequent", "most often", "high risk", "riskiest", "greatest",
                "peak", "dominant", "poses a high risk", "biggest",
            }),
            answer_template="Most accidents happened under: {label} ({count} of {total} records).",
            result_shape=SCALAR,
        ),
        CommandSpec(
            name="least_of",
            slots=(SlotSpec("target_table", TABLE), SlotSpec("target_column", COLUMN)),
            tree=_col_tree("least_of", "value_counts", "argmin_key"),
            trace=(
                ("target_table", (0, 0, 0, 0, 0)),
                ("target_column", (0, 0, 0, 0, 1)),
                ("aggregation", (0, 0)),
            ),
            triggers=frozenset({
                "least", "fewest", "lowest", "safest", "least common", "least frequent",
                "low risk", "rarest", "smallest",
            }),
            answer_template="Fewest accidents happened under: {label} ({count} of {total} records).",
            result_shape=SCALAR,
        ),
        CommandSpec(
            name="count",
            slots=(SlotSpec("target_table", TABLE),),
            tree=CommandDef("count", ("x",), Return(Call("row_count", Param("x")))),
            trace=(("target_table", (0, 0, 0)), ("aggregation", (0, 0))),
            triggers=frozenset({"how many", "count", "total"}),
            answer_template="Found {count} matching records.",
            result_shape=SCALAR,
        ),
        CommandSpec(
            name="distribution",
            slots=(SlotSpec("target_table", TABLE), SlotSpec("target_column", COLUMN)),
            tree=_col_tree("distribution", "value_counts"),
            trace=(
                ("target_table", (0, 0, 0, 0)),
                ("target_column", (0, 0, 0, 1)),
                ("aggregation", (0, 0)),
            ),
            triggers=frozenset({
                "distribution", "breakdown", "distributed", "repartition", "split",
            }),
            answer_template="Distribution of {column}: {entries}.",
            result_shape=DISTRIBUTION,
        ),
        CommandSpec(
            name="share",
            slots=(
                SlotSpec("target_table", TABLE),
                SlotSpec("target_column", COLUMN),
                SlotSpec("target_value", VALUE),
            ),
            tree=CommandDef(
                "share",
                ("x", "y", "v"),
                Return(Call("share_of", Call("value_counts", ColumnSelect("x", "y")), (Param("v"),))),
            ),
            trace=(
                ("target_table", (0, 0, 0, 0, 0)),
                ("target_column", (0, 0, 0, 0, 1)),
                ("target_value", (0, 0, 1)),
                ("aggregation", (0, 0)),
            ),
            triggers=frozenset({
                "share", "percentage", "proportion", "fraction", "percent", "ratio",
            }),
            answer_template="{label} accounts for {pct}% of records ({count} of {total}).",
            result_shape=SCALAR,
        ),
        CommandSpec(
            name="trend_by_year",
            slots=(
                SlotSpec("target_table", TABLE, default="characteristics"),
                SlotSpec("year_column", COLUMN, default="an"),
            ),
            tree=_col_tree("trend_by_year", "value_counts", "trend_direction"),
            trace=(
                ("target_table", (0, 0, 0, 0, 0)),
                ("year_column", (0, 0, 0, 0, 1)),
                ("aggregation", (0, 0)),
            ),
            # no trigger here may normalize to the bare {year} token set:
            # it would tie with column-bound commands on year-ish questions
            triggers=frozenset({
                "per year", "yearly", "over the years", "trend", "decreasing",
                "increasing", "over time", "evolution", "evolve", "going down", "going up",
            }),
            answer_template="Accidents per year are {direction} ({series}).",
            result_shape=SERIES,
        ),
        CommandSpec(
            name="describe",
            slots=(SlotSpec("target_table", TABLE), SlotSpec("target_column", COLUMN)),
            tree=_col_tree("describe", "summary_stats"),
            trace=(
                ("target_table", (0, 0, 0, 0)),
                ("target_column", (0, 0, 0, 1)),
                ("aggregation", (0, 0)),
            ),
            triggers=frozenset({
                "describe", "summary", "statistics", "summarize", "average", "mean",
                "median", "standard deviation", "stats", "min and max",
            }),
            answer_template=(
                "Summary of {column}: min {min}, max {max}, mean {mean}, "
                "median {median}, std {std}."
            ),
            result_shape=SUMMARY,
        ),
        CommandSpec(
            name="crosstab",
            slots=(
                SlotSpec("target_table", TABLE),
                SlotSpec("a", COLUMN),
                SlotSpec("b", COLUMN),
            ),
            tree=CommandDef(
                "crosstab",
                ("x", "a", "b"),
                Return(
                    Call(
                        "contingency",
                        Param("x"),
                        (ColumnSelect("x", "a"), ColumnSelect("x", "b")),
                    )
                ),
            ),
            trace=(
                ("target_table", (0, 0, 0)),
                ("a", (0, 0, 1, 1)),
                ("b", (0, 0, 2, 1)),
                ("aggregation", (0, 0)),
            ),
            triggers=frozenset({
                "impact", "effect", "influence", "crosstab", "cross table",
                "relationship between", "related to", "versus", "compared with",
                "against", "affect", "depend on", "correlation",
            }),
            answer_template="Contingency of {a} by {b}: {matrix}",
            result_shape=CROSSTAB,
        ),
        CommandSpec(
            name="filter_preview",
            slots=(
                SlotSpec("target_table", TABLE),
                SlotSpec("limit", VALUE, default=10),
            ),
            tree=CommandDef(
                "filter_preview",
                ("x", "n"),
                Return(Call("head", Param("x"), (Param("n"),))),
            ),
            trace=(("target_table", (0, 0, 0)), ("limit", (0, 0, 1))),
            triggers=frozenset({
                "show", "show me", "preview", "first rows", "sample", "list",
                "display", "examples",
            }),
            answer_template="First {n} matching rows of {table}: {rows}",
            result_shape=PREVIEW,
        ),
    ]
    validate_registry(specs)
    return specs


def validate_registry(specs: list[CommandSpec]) -> None:
    seen_triggers: dict[str, str] = {}
    for spec in specs:
        semtree.validate(spec.tree)
        if spec.result_shape not in (SCALAR, DISTRIBUTION, SERIES, CROSSTAB, SUMMARY, PREVIEW):
            raise InvalidTracePath(f"{spec.name}: bad result shape {spec.result_shape!r}")
        entries = dict(spec.trace)
        for name, path in spec.trace:
            semtree.node_at(spec.tree, path)  # raises InvalidTracePath on dangling paths
        for s in spec.slots:
            if s.kind not in _KINDS:
                raise KindMismatch(f"{spec.name}: bad slot kind {s.kind!r}")
            if s.name not in entries:
                raise InvalidTracePath(f"{spec.name}: slot {s.name!r} has no trace entry")
            spec.param_for_slot(s.name)
        for phrase in spec.triggers:
            owner = seen_triggers.get(phrase)
            if owner is not None and owner != spec.name:
                raise KindMismatch(f"trigger {phrase!r} claimed by {owner} and {spec.name}")
            seen_triggers[phrase] = spec.name


def registry_by_name(specs: list[CommandSpec]) -> dict[str, CommandSpec]:
    return {s.name: s for s in specs}
