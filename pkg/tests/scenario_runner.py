"""Drive the committed two-user scenario script against a dialogue manager."""

from __future__ import annotations

from pathlib import Path

from tabletalk.dialogue import DialogueManager
from tabletalk.sessions import COMMENT


def run_scenario(path: Path, manager: DialogueManager) -> dict[str, list[str]]:
    """Replays the script; returns assistant texts per session."""
    texts: dict[str, list[str]] = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        op, rest = line.split(" ", 1)
        if op == "session":
            session, owner = rest.split(" ", 1)
            manager.create_session(owner, session)
            texts.setdefault(session, [])
        elif op == "query":
            session, user, utterance = rest.split(" ", 2)
            turn = manager.handle(session, user, utterance)
            texts[session].append(turn.text)
        elif op == "comment":
            session, user, target, text = rest.split(" ", 3)
            manager.deps.store.append_new(
                session, user, COMMENT, {"text": text, "target_seq": int(target)}
            )
        else:
            raise ValueError(f"unknown scenario op {op!r}")
    return texts
