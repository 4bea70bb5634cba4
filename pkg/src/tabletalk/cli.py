"""Operator entry points: validate data, ask one-shot questions, run a
terminal dialogue, evaluate the matcher corpus, and serve the HTTP API.

Exit codes: ask returns 2 on no-match; eval returns 1 below the accuracy
gate; ingest returns 1 when any file exceeds the rejection cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path

from .catalog import MetadataCatalog, load_catalog, shipped_catalog
from .dialogue import Dependencies, DialogueManager
from .errors import TableTalkError
from .matcher import match
from .registry import builtin_registry
from .sessions import SessionStore
from .tables import drop_missing, load_table, load_tables_from_dir

ACCURACY_GATE = 0.90


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("TABLETALK_DATA_DIR", "fixtures"),
        help="directory holding <table>.csv files",
    )
    parser.add_argument(
        "--catalog",
        default=os.environ.get("TABLETALK_CATALOG"),
        help="catalog file (defaults to the shipped catalog)",
    )
    parser.add_argument(
        "--log-file",
        default=os.environ.get("TABLETALK_LOG_FILE"),
        help="session log path (defaults to a temporary file)",
    )


def _load_catalog(args) -> MetadataCatalog:
    if args.catalog:
        with open(args.catalog, "rb") as fh:
            return load_catalog(fh)
    return shipped_catalog()


def _make_deps(args) -> Dependencies:
    catalog = _load_catalog(args)
    tables = load_tables_from_dir(args.data_dir, catalog)
    log_file = args.log_file or os.path.join(tempfile.mkdtemp(prefix="tabletalk-"), "sessions.ndjson")
    store = SessionStore(log_file)
    return Dependencies(catalog, builtin_registry(), tables, store)


def cmd_ingest(args) -> int:
    catalog = _load_catalog(args)
    failures = 0
    for name in catalog.table_names():
        path = Path(args.data_dir) / f"{name}.csv"
        if not path.exists():
            print(f"{name}: no file at {path}")
            continue
        try:
            with path.open("rb") as fh:
                table = load_table(
                    fh, name, catalog,
                    lenient=args.lenient,
                    allow_unknown_columns=args.lenient,
                )
        except TableTalkError as exc:
            print(f"{name}: FAILED ({exc})")
            failures += 1
            continue
        report = table.report
        print(
            f"{name}: {table.row_count} rows loaded, "
            f"{len(report.rejected)} rejected (delimiter {report.delimiter!r})"
        )
        for lineno, reason in report.rejected[:10]:
            print(f"  line {lineno}: {reason}")
    if args.check_atm and "characteristics" in catalog.table_names():
        path = Path(args.data_dir) / "characteristics.csv"
        if path.exists():
            with path.open("rb") as fh:
                table = load_table(fh, "characteristics", catalog, lenient=True,
                                   allow_unknown_columns=True)
            _, removed = drop_missing(table, "atm")
            print(f"characteristics: drop_missing(atm) removed {removed} rows "
                  f"(reference scenario reports 55 for its year)")
    return 1 if failures else 0


def cmd_download(args) -> int:
    from .downloader import fetch_tables

    paths = fetch_tables(args.urls_config, args.cache_dir)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def cmd_ask(args) -> int:
    deps = _make_deps(args)
    manager = DialogueManager(deps)
    session = manager.create_session(args.user, "cli")
    resolution = match(args.question, deps.catalog, deps.registry)
    turn = manager.handle(session, args.user, args.question)

    if args.format == "json":
        from .api import resolution_payload, turn_payload

        body = turn_payload(turn)
        body["resolution"] = resolution_payload(resolution)
        print(json.dumps(body, indent=2, sort_keys=True))
    else:
        print(f"resolution: {resolution.command or 'none'} "
              f"(confidence {resolution.confidence:.2f})")
        for slot, value in sorted(resolution.bindings.items()):
            print(f"  {slot} = {value}")
        for cond in resolution.conditions:
            print(f"  where {cond.column} {cond.op} {cond.value}")
        if turn.kind == "answer":
            events = deps.store.replay(session)
            for event in events:
                if event.kind == "execution":
                    print("trace:")
                    for line in event.payload["trace"].splitlines():
                        print(f"  {line}")
        print(f"[{turn.kind}] {turn.text}")
    return 2 if turn.kind == "no_match" else 0


def cmd_repl(args) -> int:
    deps = _make_deps(args)
    manager = DialogueManager(deps)
    session = manager.create_session(args.user)
    print(f"session {session} as {args.user}; empty line or /quit to exit")
    while True:
        try:
            line = input("? ").strip()
        except EOFError:
            break
        if not line or line == "/quit":
            break
        turn = manager.handle(session, args.user, line)
        print(f"[{turn.kind}] {turn.text}")
    return 0


def cmd_eval(args) -> int:
    catalog = _load_catalog(args)
    registry = builtin_registry()
    if args.corpus:
        text = Path(args.corpus).read_text(encoding="utf-8")
    else:
        text = resources.files("tabletalk.data").joinpath("corpus.tsv").read_text("utf-8")
    rows = [
        line.split("\t")
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    ]
    good = 0
    paper_good = paper_total = 0
    for utterance, command, columns, tag in rows:
        resolution = match(utterance, catalog, registry)
        got = resolved_columns(resolution)
        ok = resolution.command == command and not resolution.missing and (
            columns == "-" or got == columns
        )
        good += ok
        if tag == "paper":
            paper_total += 1
            paper_good += ok
        if not ok and args.verbose:
            print(f"MISS: {utterance}")
            print(f"  want {command}({columns})  got {resolution.command}({got}) "
                  f"missing={resolution.missing}")
    accuracy = good / len(rows) if rows else 0.0
    print(f"accuracy: {good}/{len(rows)} = {accuracy:.1%}"
          f" (case-study questions {paper_good}/{paper_total})")
    return 0 if accuracy >= ACCURACY_GATE else 1


def resolved_columns(resolution) -> str:
    b = resolution.bindings
    if resolution.command in ("most_of", "least_of", "distribution", "describe", "share"):
        if b.get("target_column"):
            return f"{b.get('target_table')}.{b.get('target_column')}"
        return "-"
    if resolution.command == "trend_by_year":
        return f"{b.get('target_table')}.{b.get('year_column')}"
    if resolution.command == "crosstab":
        if b.get("a") and b.get("b"):
            table = b.get("target_table")
            return f"{table}.{b.get('a')}|{table}.{b.get('b')}"
        return "-"
    return "-"


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    deps = _make_deps(args)
    app = create_app(deps)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tabletalk")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate CSVs against the catalog")
    _add_common(p)
    p.add_argument("--lenient", action="store_true",
                   help="reject bad rows instead of failing, skip unknown headers")
    p.add_argument("--check-atm", action="store_true",
                   help="report the drop_missing removal count on atm")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("download", help="fetch configured source CSVs")
    p.add_argument("--urls-config", required=True, help="JSON file mapping tables to URLs")
    p.add_argument("--cache-dir", default=".tabletalk-cache")
    p.set_defaults(func=cmd_download)

    p = sub.add_parser("ask", help="one-shot question")
    _add_common(p)
    p.add_argument("question")
    p.add_argument("--user", default="cli")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("repl", help="interactive dialogue")
    _add_common(p)
    p.add_argument("--user", default="cli")
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("eval", help="matcher corpus accuracy")
    _add_common(p)
    p.add_argument("--corpus", help="labeled corpus TSV (defaults to the shipped one)")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP API")
    _add_common(p)
    p.add_argument("--host", default=os.environ.get("TABLETALK_HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(os.environ.get("TABLETALK_PORT", "8123")))
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
