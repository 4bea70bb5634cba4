"""Turn a raw utterance into a command resolution.

Scoring is transparent and fixed: 0.7 x best trigger-phrase Jaccard overlap
+ 0.3 x slot-fill coverage, with a small per-user history bonus that only
breaks near-ties (window 0.02, bonus <= 0.01). Commands below the 0.35
threshold resolve to none.

Lexicon scanning is a greedy left-to-right longest-match over the catalog's
column synonyms, codebook value phrases, and table terms; all phrases are
compared as normalized token sets, so word order inside a phrase is free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import ColumnMeta, MetadataCatalog, ValueHit
from .registry import (
    COLUMN,
    CommandSpec,
    Condition,
    TABLE,
    VALUE,
)
from .text import norm_phrase, norm_tokens

TRIGGER_WEIGHT = 0.7
COVERAGE_WEIGHT = 0.3
THRESHOLD = 0.35
TIE_WINDOW = 0.02
HISTORY_BONUS = 0.01
DEFAULT_TABLE = "characteristics"

_YEAR_RANGE = range(1900, 2101)
_AFTER_WORDS = {"after", "since"}
_BEFORE_WORDS = {"before", "until"}


@dataclass
class UserProfile:
    user: str
    command_counts: dict[str, int] = field(default_factory=dict)

    def normalized(self, command: str) -> float:
        total = sum(self.command_counts.values())
        if total <= 0:
            return 0.0
        return self.command_counts.get(command, 0) / total


@dataclass
class QueryResolution:
    command: str | None
    bindings: dict
    missing: list[str]
    confidence: float
    alternatives: list[tuple[str, float]]
    conditions: tuple[Condition, ...] = ()


@dataclass(frozen=True)
class LexMatch:
    start: int
    length: int
    columns: tuple[ColumnMeta, ...] = ()
    values: tuple[ValueHit, ...] = ()
    table: str | None = None


def tokenize(utterance: str) -> list[str]:
    """Lowercased, punctuation-stripped, stop-word-free, stemmed tokens."""
    return norm_tokens(utterance)


def scan_lexicon(tokens: list[str], catalog: MetadataCatalog) -> list[LexMatch]:
    """Greedy longest-match scan producing non-overlapping lexicon matches."""
    matches: list[LexMatch] = []
    limit = min(catalog.max_phrase_len(), 4)
    i = 0
    while i < len(tokens):
        hit = None
        for n in range(min(limit, len(tokens) - i), 0, -1):
            key = frozenset(tokens[i : i + n])
            cols = tuple(catalog.column_candidates(key))
            vals = tuple(catalog.value_candidates(key))
            table = catalog.table_for_term(key)
            if cols or vals or table:
                hit = LexMatch(i, n, cols, vals, table)
                break
        if hit is None:
            i += 1
        else:
            matches.append(hit)
            i = hit.start + hit.length
    return _disambiguate_values(matches)


def _disambiguate_values(matches: list[LexMatch]) -> list[LexMatch]:
    """Narrow ambiguous value phrases: first by an adjacent column match
    naming the column, then by preferring explicitly declared query terms
    over incidental label homonyms. Still-ambiguous readings are dropped,
    never guessed."""
    out: list[LexMatch] = []
    for idx, m in enumerate(matches):
        if len(m.values) <= 1:
            out.append(m)
            continue
        adjacent: set[tuple[str, str]] = set()
        for j in (idx - 1, idx + 1):
            if 0 <= j < len(matches):
                adjacent.update(cm.key for cm in matches[j].columns)
        narrowed = tuple(h for h in m.values if h.meta.key in adjacent)
        if len(narrowed) != 1:
            narrowed = tuple(h for h in m.values if h.declared)
        if len(narrowed) != 1:
            narrowed = ()
        out.append(LexMatch(m.start, m.length, m.columns, narrowed, m.table))
    return out


def _year_conditions(tokens: list[str]) -> list[tuple[int, Condition]]:
    conds = []
    for i, tok in enumerate(tokens):
        if not tok.isdigit():
            continue
        year = int(tok)
        if year not in _YEAR_RANGE:
            continue
        op = "="
        if i > 0 and tokens[i - 1] in _AFTER_WORDS:
            op = ">"
        elif i > 0 and tokens[i - 1] in _BEFORE_WORDS:
            op = "<"
        conds.append((i, Condition("an", op, year)))
    return conds


def extract_conditions(tokens: list[str], catalog: MetadataCatalog) -> list[Condition]:
    """Equality conditions from unambiguous codebook phrases plus year
    comparisons; unrecognized fragments are ignored, never guessed."""
    positioned: list[tuple[int, Condition]] = list(_year_conditions(tokens))
    for m in scan_lexicon(tokens, catalog):
        if len(m.values) == 1:
            hit = m.values[0]
            positioned.append((m.start, Condition(hit.meta.column, "=", hit.code)))
    positioned.sort(key=lambda pc: pc[0])
    return [c for _, c in positioned]


def _jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


def _trigger_score(spec: CommandSpec, token_set: frozenset[str]) -> float:
    best = 0.0
    for phrase in spec.triggers:
        ts = frozenset(norm_phrase(phrase))
        if ts:
            best = max(best, _jaccard(ts, token_set))
    return best


@dataclass
class _Draft:
    bindings: dict
    missing: list[str]
    conditions: tuple[Condition, ...]
    coverage: float


def _column_readings(
    matches: list[LexMatch], table_hint: str | None
) -> list[tuple[int, ColumnMeta]]:
    """(match index, column) for unambiguous column readings in utterance
    order. A term naming the same column in several tables resolves only with
    an explicit table hint."""
    out = []
    for i, m in enumerate(matches):
        if not m.columns:
            continue
        cands = list(m.columns)
        if len(cands) > 1 and table_hint:
            cands = [cm for cm in cands if cm.table == table_hint]
        if len(cands) == 1:
            out.append((i, cands[0]))
    return out


def _build_draft(
    spec: CommandSpec,
    matches: list[LexMatch],
    tokens: list[str],
    catalog: MetadataCatalog,
) -> _Draft:
    table_hint = next((m.table for m in matches if m.table), None)
    columns = _column_readings(matches, table_hint)
    value_hits: list[tuple[int, int, ColumnMeta, int]] = [
        (i, m.start, m.values[0].meta, m.values[0].code)
        for i, m in enumerate(matches)
        if len(m.values) == 1
    ]
    year_conds = _year_conditions(tokens)

    bindings: dict = {}
    missing: list[str] = []
    consumed: set[int] = set()

    column_slots = [s for s in spec.slots if s.kind == COLUMN]
    queue = list(columns)
    for slot in column_slots:
        if slot.default is not None:
            bindings[slot.name] = slot.default
        elif spec.name == "share":
            continue  # filled from the value hit below
        elif queue:
            idx, cm = queue.pop(0)
            consumed.add(idx)
            bindings[slot.name] = cm.column
            bindings.setdefault("target_table", cm.table)
        else:
            missing.append(slot.name)

    if spec.name == "share":
        free_values = [v for v in value_hits if v[0] not in consumed]
        if free_values:
            idx, _, cm, code = free_values[0]
            consumed.add(idx)
            bindings["target_column"] = cm.column
            bindings["target_table"] = cm.table
            bindings["target_value"] = code
        else:
            if queue:
                idx, cm = queue.pop(0)
                consumed.add(idx)
                bindings["target_column"] = cm.column
                bindings.setdefault("target_table", cm.table)
            else:
                missing.append("target_column")
            missing.append("target_value")
    else:
        for slot in spec.slots:
            if slot.kind == VALUE and slot.name not in bindings:
                if slot.default is not None:
                    bindings[slot.name] = slot.default
                else:
                    missing.append(slot.name)

    # a match bound to a slot never doubles as a filter condition
    conditions: list[tuple[int, Condition]] = list(year_conds)
    for idx, pos, cm, code in value_hits:
        if idx in consumed:
            continue
        conditions.append((pos, Condition(cm.column, "=", code)))
    conditions.sort(key=lambda pc: pc[0])
    ordered_conditions = tuple(c for _, c in conditions)

    for slot in spec.slots:
        if slot.kind != TABLE or slot.name in bindings:
            continue
        # first bound column's table was set above; fall back in order:
        # condition column owner, explicit table term, shipped default
        chosen: str | None = None
        for cond in ordered_conditions:
            owners = [cm for cm in catalog.columns if cm.column == cond.column]
            if len(owners) == 1:
                chosen = owners[0].table
                break
        if chosen is None:
            chosen = table_hint
        if chosen is None:
            chosen = slot.default if isinstance(slot.default, str) else DEFAULT_TABLE
        bindings[slot.name] = chosen

    resolved = len(spec.slots) - len(missing)
    coverage = resolved / len(spec.slots) if spec.slots else 1.0
    return _Draft(bindings, missing, ordered_conditions, coverage)


def match(
    utterance: str,
    catalog: MetadataCatalog,
    registry: list[CommandSpec],
    profile: UserProfile | None = None,
) -> QueryResolution:
    """Score every registered command against the utterance and resolve the
    best one, binding slots from the lexicon scan."""
    tokens = tokenize(utterance)
    token_set = frozenset(tokens)
    matches = scan_lexicon(tokens, catalog)

    drafts: dict[str, _Draft] = {}
    base: dict[str, float] = {}
    for spec in registry:
        draft = _build_draft(spec, matches, tokens, catalog)
        drafts[spec.name] = draft
        base[spec.name] = (
            TRIGGER_WEIGHT * _trigger_score(spec, token_set)
            + COVERAGE_WEIGHT * draft.coverage
        )

    top = max(base.values())
    adjusted: dict[str, float] = {}
    for name, score in base.items():
        bonus = 0.0
        if profile is not None and score >= top - TIE_WINDOW:
            bonus = HISTORY_BONUS * profile.normalized(name)
        adjusted[name] = min(score + bonus, 1.0)

    ranked = sorted(adjusted.items(), key=lambda kv: (-kv[1], kv[0]))
    best_name, best_score = ranked[0]

    if best_score < THRESHOLD:
        return QueryResolution(
            command=None,
            bindings={},
            missing=[],
            confidence=round(best_score, 6),
            alternatives=[(n, round(s, 6)) for n, s in ranked[:3]],
        )

    draft = drafts[best_name]
    return QueryResolution(
        command=best_name,
        bindings=dict(draft.bindings),
        missing=list(draft.missing),
        confidence=round(best_score, 6),
        alternatives=[(n, round(s, 6)) for n, s in ranked[1:4]],
        conditions=draft.conditions,
    )
