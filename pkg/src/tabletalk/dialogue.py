"""Conversation driver: route utterances through the matcher, clarify
missing slots, execute bound commands, and render template answers.

Per-session turns are strictly serialized; every turn appends its events
(user query, resolution, execution, assistant turn) to the session store, so
replaying a session's utterances over the same tables reproduces the stored
assistant texts byte for byte.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, replace

from . import sessions
from .catalog import MetadataCatalog, resolve_term
from .engine import (
    Crosstab,
    Distribution,
    Preview,
    ResultValue,
    Scalar,
    Series,
    Summary,
    execute,
    result_shape,
    result_to_payload,
)
from .errors import (
    EmptyAfterFilter,
    EmptyColumn,
    KindMismatch,
    MissingSlot,
    NonNumericColumn,
    SessionNotFound,
    ShapeMismatch,
    TableTalkError,
    UnknownColumn,
    UnknownTable,
)
from .matcher import QueryResolution, match, tokenize
from .registry import COLUMN, VALUE, BoundCommand, CommandSpec, bind
from .sessions import SessionStore, derive_profile
from .tables import Table
from .text import norm_phrase

MAX_CLARIFICATIONS = 3
SUGGESTION_COUNT = 3

# columns offered when the user must pick an attribute, in display order
SUGGESTED_COLUMNS = (
    ("characteristics", "atm", "weather"),
    ("characteristics", "mois", "month"),
    ("places", "catr", "road category"),
)

EXAMPLE_QUESTIONS = (
    "What weather has the most accidents?",
    "Which months exhibit a higher frequency of accidents?",
    "What is the distribution of sexes among the individuals affected?",
)

_PERCENT_PHRASES = (
    frozenset({"percentage"}),
    frozenset({"percent"}),
    frozenset({"show", "percentage"}),
    frozenset({"show", "percent"}),
)


@dataclass(frozen=True)
class Pending:
    command: str
    bindings: dict
    missing: tuple[str, ...]
    conditions: tuple
    clarifications: int


@dataclass
class DialogueState:
    session: str
    user: str
    pending: Pending | None = None
    last_result: ResultValue | None = None
    turn_count: int = 0


@dataclass(frozen=True)
class AssistantTurn:
    kind: str  # answer | clarification | no_match | error
    text: str
    result: ResultValue | None = None
    resolution: QueryResolution | None = None


@dataclass(frozen=True)
class Dependencies:
    catalog: MetadataCatalog
    registry: list[CommandSpec]
    tables: dict[str, Table]
    store: SessionStore

    def spec(self, name: str) -> CommandSpec:
        for s in self.registry:
            if s.name == name:
                return s
        raise KeyError(name)


def _fmt_float(x: float) -> str:
    s = f"{x:.4f}".rstrip("0")
    return s + "0" if s.endswith(".") else s


def _pct(count: int, total: int) -> str:
    return f"{100.0 * count / total:.1f}" if total else "0.0"


def _column_desc(catalog: MetadataCatalog, result) -> str:
    return getattr(result, "column", "")


def render_answer(spec: CommandSpec, result: ResultValue, catalog: MetadataCatalog) -> str:
    """Fill the command's answer template from the typed result."""
    if result_shape(result) != spec.result_shape:
        raise ShapeMismatch(
            f"{spec.name} renders {spec.result_shape}, got {result_shape(result)}"
        )
    template = spec.answer_template

    if isinstance(result, Scalar):
        total = result.total or 0
        return template.format(
            label=result.label,
            count=result.count if result.count is not None else result.value,
            total=total,
            pct=_pct(result.count or 0, total),
        )
    if isinstance(result, Distribution):
        shown = result.entries[:5]
        parts = [f"{label}: {n} ({_pct(n, result.total)}%)" for _, label, n in shown]
        rest = result.entries[5:]
        if rest:
            other = sum(n for _, _, n in rest)
            parts.append(f"other: {other} ({_pct(other, result.total)}%)")
        return template.format(column=_column_desc(catalog, result), entries=", ".join(parts))
    if isinstance(result, Series):
        series = ", ".join(f"{year}: {n}" for year, n in result.points)
        return template.format(direction=result.direction, series=series)
    if isinstance(result, Summary):
        return template.format(
            column=result.column,
            min=result.min,
            max=result.max,
            mean=_fmt_float(result.mean),
            median=result.median,
            std=_fmt_float(result.std),
        )
    if isinstance(result, Crosstab):
        lines = []
        for r_label, row in zip(result.row_labels, result.counts):
            cells = ", ".join(
                f"{c_label}={n}" for c_label, n in zip(result.col_labels, row)
            )
            lines.append(f"{r_label}: {cells}")
        return template.format(a=result.row_column, b=result.col_column, matrix="; ".join(lines))
    if isinstance(result, Preview):
        lines = []
        for row in result.rows:
            cells = ", ".join(f"{c}={'' if v is None else v}" for c, v in zip(result.columns, row))
            lines.append(f"[{cells}]")
        return template.format(n=len(result.rows), table=result.table, rows=" ".join(lines))
    raise ShapeMismatch(f"no renderer for {type(result).__name__}")


def _suggestions_text(kind: str, deps: Dependencies, pending: Pending) -> str:
    if kind == COLUMN:
        bound = set(pending.bindings.values())
        terms = [term for _, col, term in SUGGESTED_COLUMNS if col not in bound]
        picks = terms[:SUGGESTION_COUNT]
        return f"Which attribute do you mean: {', '.join(picks[:-1])}, or {picks[-1]}?"
    if kind == VALUE:
        column = pending.bindings.get("target_column")
        table = pending.bindings.get("target_table")
        cm = deps.catalog.get(table, column) if column else None
        if cm is not None and cm.codebook:
            labels = [label for _, label in cm.codebook[:SUGGESTION_COUNT]]
            return f"Which value do you mean: {', '.join(labels)}?"
        return "Which value do you mean?"
    return "Which table do you mean: accidents, places, users, or vehicles?"


def _no_match_text() -> str:
    quoted = ", ".join(f"'{q}'" for q in EXAMPLE_QUESTIONS)
    return f"I could not match that to a known question. Try questions like: {quoted}"


def _error_text(exc: TableTalkError) -> str:
    if isinstance(exc, EmptyAfterFilter):
        return "No data matches this question on the loaded tables."
    if isinstance(exc, (NonNumericColumn, EmptyColumn)):
        return f"That column cannot be summarized numerically ({exc})."
    if isinstance(exc, (UnknownColumn, UnknownTable)):
        return f"The question references data that is not loaded ({exc})."
    return f"The command could not be executed ({exc})."


def _fill_pending(pending: Pending, utterance: str, deps: Dependencies) -> Pending | None:
    """Try to read the utterance as an answer for the first missing slot."""
    spec = deps.spec(pending.command)
    slot_name = pending.missing[0]
    slot = spec.slot(slot_name)
    if slot is None:
        return None
    bindings = dict(pending.bindings)

    if slot.kind == COLUMN:
        hits = resolve_term(deps.catalog, utterance.strip())
        if not hits or hits[0][1] < 0.8:
            return None
        meta = hits[0][0]
        bindings[slot_name] = meta.column
        # the chosen column decides the table; an earlier default loses
        if slot_name in ("target_column", "year_column") or "target_table" not in bindings:
            bindings["target_table"] = meta.table
    elif slot.kind == VALUE:
        text = utterance.strip()
        if text.lstrip("-").isdigit():
            bindings[slot_name] = int(text)
        else:
            column = bindings.get("target_column")
            table = bindings.get("target_table")
            cm = deps.catalog.get(table, column) if column else None
            if cm is None:
                return None
            tokens = frozenset(norm_phrase(text))
            code = None
            for cand, label in cm.codebook:
                if frozenset(norm_phrase(label)) == tokens:
                    code = cand
                    break
            if code is None:
                for cand, terms in cm.value_terms:
                    if any(frozenset(norm_phrase(t)) == tokens for t in terms):
                        code = cand
                        break
            if code is None:
                return None
            bindings[slot_name] = code
    else:  # table slot
        key = frozenset(norm_phrase(utterance))
        table = deps.catalog.table_for_term(key)
        if table is None:
            return None
        bindings[slot_name] = table

    missing = tuple(s.name for s in spec.slots if s.name not in bindings)
    return replace(pending, bindings=bindings, missing=missing)


def handle_turn(
    state: DialogueState, utterance: str, deps: Dependencies, turn_id: str | None = None
) -> tuple[DialogueState, AssistantTurn]:
    """Process one user utterance; returns the updated state and the turn.

    Appends user_query, resolution, execution, and assistant_turn events to
    the session store as applicable.
    """
    store = deps.store
    user = state.user
    session = state.session
    payload = {"text": utterance}
    if turn_id:
        payload["turn_id"] = turn_id
    store.append_new(session, user, sessions.USER_QUERY, payload)

    state = replace(state, turn_count=state.turn_count + 1)

    # follow-up on the previous result: re-render as percentages
    if state.pending is None and state.last_result is not None:
        tokens = frozenset(tokenize(utterance))
        if tokens in _PERCENT_PHRASES and isinstance(state.last_result, Distribution):
            dist = state.last_result
            parts = [f"{label}: {_pct(n, dist.total)}%" for _, label, n in dist.entries[:5]]
            text = f"As percentages: {', '.join(parts)}."
            turn = AssistantTurn(kind="answer", text=text, result=dist)
            _append_turn(store, session, user, turn)
            return state, turn

    resolution: QueryResolution | None = None
    if state.pending is not None:
        filled = _fill_pending(state.pending, utterance, deps)
        if filled is not None:
            if filled.missing:
                return _clarify(state, filled, deps, None)
            spec = deps.spec(filled.command)
            return _execute_turn(
                state, spec, filled.bindings, filled.conditions, None, deps
            )
        # not a slot answer: fall back to a full match
        resolution = match(utterance, deps.catalog, deps.registry, _profile(deps, user))
        _append_resolution(store, session, user, resolution)
        if resolution.command is None:
            pending = state.pending
            if pending.clarifications >= MAX_CLARIFICATIONS:
                turn = AssistantTurn(kind="no_match", text=_no_match_text(), resolution=resolution)
                _append_turn(store, session, user, turn)
                return replace(state, pending=None), turn
            return _clarify(state, pending, deps, resolution, again=True)
    else:
        resolution = match(utterance, deps.catalog, deps.registry, _profile(deps, user))
        _append_resolution(store, session, user, resolution)

    if resolution.command is None:
        turn = AssistantTurn(kind="no_match", text=_no_match_text(), resolution=resolution)
        _append_turn(store, session, user, turn)
        return replace(state, pending=None), turn

    spec = deps.spec(resolution.command)
    if resolution.missing:
        pending = Pending(
            command=resolution.command,
            bindings=dict(resolution.bindings),
            missing=tuple(resolution.missing),
            conditions=resolution.conditions,
            clarifications=0,
        )
        return _clarify(state, pending, deps, resolution)

    return _execute_turn(
        state, spec, resolution.bindings, resolution.conditions, resolution, deps
    )


def _profile(deps: Dependencies, user: str):
    return derive_profile(deps.store, user)


def _append_resolution(store, session, user, resolution: QueryResolution) -> None:
    store.append_new(
        session,
        user,
        sessions.RESOLUTION,
        {
            "command": resolution.command,
            "bindings": dict(resolution.bindings),
            "missing": list(resolution.missing),
            "confidence": resolution.confidence,
            "conditions": [
                {"column": c.column, "op": c.op, "value": c.value}
                for c in resolution.conditions
            ],
            "alternatives": [[n, s] for n, s in resolution.alternatives],
        },
    )


def _append_turn(store, session, user, turn: AssistantTurn) -> None:
    store.append_new(
        session,
        user,
        sessions.ASSISTANT_TURN,
        {
            "kind": turn.kind,
            "text": turn.text,
            "result": result_to_payload(turn.result) if turn.result is not None else None,
        },
    )


def _clarify(
    state: DialogueState,
    pending: Pending,
    deps: Dependencies,
    resolution: QueryResolution | None,
    again: bool = False,
) -> tuple[DialogueState, AssistantTurn]:
    store = deps.store
    if pending.clarifications >= MAX_CLARIFICATIONS:
        turn = AssistantTurn(kind="no_match", text=_no_match_text(), resolution=resolution)
        _append_turn(store, state.session, state.user, turn)
        return replace(state, pending=None), turn
    spec = deps.spec(pending.command)
    slot = spec.slot(pending.missing[0])
    text = _suggestions_text(slot.kind if slot else COLUMN, deps, pending)
    if again:
        text = f"Sorry, I did not catch that. {text}"
    pending = replace(pending, clarifications=pending.clarifications + 1)
    turn = AssistantTurn(kind="clarification", text=text, resolution=resolution)
    _append_turn(store, state.session, state.user, turn)
    return replace(state, pending=pending), turn


def _execute_turn(
    state: DialogueState,
    spec: CommandSpec,
    bindings: dict,
    conditions: tuple,
    resolution: QueryResolution | None,
    deps: Dependencies,
) -> tuple[DialogueState, AssistantTurn]:
    store = deps.store
    try:
        bound: BoundCommand = bind(spec, bindings, conditions)
        result, trace = execute(bound, deps.tables, deps.catalog)
        text = render_answer(spec, result, deps.catalog)
    except MissingSlot as exc:
        pending = Pending(spec.name, dict(bindings), tuple(exc.missing), tuple(conditions), 0)
        return _clarify(state, pending, deps, resolution)
    except (
        EmptyAfterFilter,
        UnknownColumn,
        UnknownTable,
        NonNumericColumn,
        EmptyColumn,
        KindMismatch,
        ShapeMismatch,
    ) as exc:
        turn = AssistantTurn(kind="error", text=_error_text(exc), resolution=resolution)
        _append_turn(store, state.session, state.user, turn)
        return replace(state, pending=None), turn

    store.append_new(
        state.session,
        state.user,
        sessions.EXECUTION,
        {
            "command": spec.name,
            "bindings": dict(bindings),
            "trace": trace.as_text(),
            "result": result_to_payload(result),
        },
    )
    turn = AssistantTurn(kind="answer", text=text, result=result, resolution=resolution)
    _append_turn(store, state.session, state.user, turn)
    return replace(state, pending=None, last_result=result), turn


class DialogueManager:
    """Holds per-session state and serializes turns within a session."""

    def __init__(self, deps: Dependencies):
        self.deps = deps
        self._states: dict[str, DialogueState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def create_session(self, user: str, session_id: str | None = None) -> str:
        session = session_id or uuid.uuid4().hex[:12]
        with self._registry_lock:
            self._states[session] = DialogueState(session=session, user=user)
            self._locks[session] = threading.Lock()
        return session

    def knows_session(self, session: str) -> bool:
        return session in self._states or self.deps.store.has_session(session)

    def handle(
        self, session: str, user: str, utterance: str, turn_id: str | None = None
    ) -> AssistantTurn:
        with self._registry_lock:
            state = self._states.get(session)
            if state is None:
                if not self.deps.store.has_session(session):
                    raise SessionNotFound(f"session {session!r} does not exist")
                state = DialogueState(session=session, user=user)
                self._states[session] = state
                self._locks[session] = threading.Lock()
            lock = self._locks[session]
        with lock:
            state = replace(self._states[session], user=user)
            new_state, turn = handle_turn(state, utterance, self.deps, turn_id)
            self._states[session] = new_state
            return turn
