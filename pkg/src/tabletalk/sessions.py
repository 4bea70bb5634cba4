"""Append-only collaborative session log.

One self-describing JSON record per line; an in-memory index is rebuilt from
the file on open, so the log file is the single source of truth. Appends are
serialized by a lock and fsynced before they are acknowledged; nothing is
ever updated or deleted.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import DanglingReference, SessionNotFound, StaleSequence
from .matcher import UserProfile

SCHEMA_VERSION = 1

USER_QUERY = "user_query"
RESOLUTION = "resolution"
EXECUTION = "execution"
ASSISTANT_TURN = "assistant_turn"
COMMENT = "comment"
_KINDS = (USER_QUERY, RESOLUTION, EXECUTION, ASSISTANT_TURN, COMMENT)

TITLE_LIMIT = 60


@dataclass(frozen=True)
class SessionEvent:
    session: str
    seq: int
    timestamp: str  # UTC ISO-8601
    actor: str
    kind: str
    payload: dict

    def to_record(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "session": self.session,
            "seq": self.seq,
            "ts": self.timestamp,
            "actor": self.actor,
            "kind": self.kind,
            "payload": self.payload,
        }

    @staticmethod
    def from_record(record: dict) -> "SessionEvent":
        return SessionEvent(
            session=record["session"],
            seq=record["seq"],
            timestamp=record["ts"],
            actor=record["actor"],
            kind=record["kind"],
            payload=record.get("payload", {}),
        )


@dataclass(frozen=True)
class SessionSummary:
    session: str
    owner: str
    started: str
    query_count: int
    comment_count: int
    title: str


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


class SessionStore:
    """Durable event log with per-session monotonically increasing sequences."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._events: dict[str, list[SessionEvent]] = {}
        self._turn_index: dict[tuple[str, str], dict] = {}
        self._last_turn_id: dict[str, str | None] = {}
        self._last_resolution: dict[str, dict | None] = {}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("a", encoding="utf-8")
        self._replay_file()

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    def _replay_file(self) -> None:
        if not self.path.exists():
            return
        with self.path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = SessionEvent.from_record(json.loads(line))
                self._index(event)

    def _index(self, event: SessionEvent) -> None:
        self._events.setdefault(event.session, []).append(event)
        if event.kind == USER_QUERY:
            self._last_turn_id[event.session] = event.payload.get("turn_id")
            self._last_resolution[event.session] = None
        elif event.kind == RESOLUTION:
            self._last_resolution[event.session] = event.payload
        elif event.kind == ASSISTANT_TURN:
            turn_id = self._last_turn_id.get(event.session)
            if turn_id:
                self._turn_index[(event.session, turn_id)] = {
                    "kind": event.payload.get("kind"),
                    "text": event.payload.get("text"),
                    "result": event.payload.get("result"),
                    "resolution": self._last_resolution.get(event.session),
                }

    # -- writes --------------------------------------------------------------

    def append(self, event: SessionEvent) -> int:
        """Durably append one event; returns the acknowledged sequence."""
        with self._lock:
            return self._append_locked(event)

    def append_new(self, session: str, actor: str, kind: str, payload: dict) -> SessionEvent:
        """Build the next event for a session and append it atomically."""
        with self._lock:
            event = SessionEvent(
                session=session,
                seq=len(self._events.get(session, [])) + 1,
                timestamp=utc_now(),
                actor=actor,
                kind=kind,
                payload=payload,
            )
            self._append_locked(event)
            return event

    def _append_locked(self, event: SessionEvent) -> int:
        existing = self._events.get(event.session, [])
        next_seq = len(existing) + 1
        if not existing and event.kind != USER_QUERY:
            raise SessionNotFound(f"session {event.session!r} does not exist")
        if event.seq != next_seq:
            raise StaleSequence(
                f"session {event.session!r}: expected seq {next_seq}, got {event.seq}"
            )
        if event.kind not in _KINDS:
            raise ValueError(f"unknown event kind {event.kind!r}")
        if event.kind == COMMENT:
            target = event.payload.get("target_seq")
            if target is not None and not (1 <= target < next_seq):
                raise DanglingReference(
                    f"comment targets ({event.session}, {target}) which does not exist"
                )
        self._fh.write(json.dumps(event.to_record(), sort_keys=True) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())
        self._index(event)
        return event.seq

    # -- reads ---------------------------------------------------------------

    def has_session(self, session: str) -> bool:
        return session in self._events

    def replay(self, session: str) -> list[SessionEvent]:
        events = self._events.get(session)
        if events is None:
            raise SessionNotFound(f"session {session!r} does not exist")
        return list(events)

    def events_since(self, session: str, since: int = 0) -> list[SessionEvent]:
        return [e for e in self.replay(session) if e.seq > since]

    def list_sessions(
        self, user: str | None = None, text: str | None = None
    ) -> list[SessionSummary]:
        summaries = []
        for session, events in self._events.items():
            first = events[0]
            queries = [e for e in events if e.kind == USER_QUERY]
            comments = [e for e in events if e.kind == COMMENT]
            title = queries[0].payload.get("text", "") if queries else ""
            summaries.append(
                SessionSummary(
                    session=session,
                    owner=first.actor,
                    started=first.timestamp,
                    query_count=len(queries),
                    comment_count=len(comments),
                    title=title[:TITLE_LIMIT],
                )
            )
        if user is not None:
            summaries = [s for s in summaries if s.owner == user]
        if text is not None:
            needle = text.lower()
            summaries = [s for s in summaries if needle in s.title.lower()]
        summaries.sort(key=lambda s: (s.started, s.session), reverse=True)
        return summaries

    def find_turn(self, session: str, turn_id: str) -> dict | None:
        """Stored assistant turn for an already-processed client turn id."""
        return self._turn_index.get((session, turn_id))


def derive_profile(store: SessionStore, user: str) -> UserProfile:
    """Per-user command frequencies, derived from the append-only log."""
    counts: dict[str, int] = {}
    for session in list(store._events):
        for event in store.replay(session):
            if event.kind == RESOLUTION and event.actor == user:
                command = event.payload.get("command")
                if command:
                    counts[command] = counts.get(command, 0) + 1
    return UserProfile(user=user, command_counts=counts)
