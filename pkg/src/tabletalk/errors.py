"""Exception types shared across the package.

Every error that can cross a module boundary gets a distinct class so the
API layer can map it to exactly one (status, code) pair.
"""

from __future__ import annotations


class TableTalkError(Exception):
    """Base class; `code` is the machine-readable identifier."""

    code = "internal"


class UnknownColumn(TableTalkError):
    code = "unknown_column"


class UnknownTable(TableTalkError):
    code = "unknown_table"


class TypeViolation(TableTalkError):
    code = "type_violation"


class EmptySource(TableTalkError):
    code = "empty_source"


class TooManyRejectedRows(TableTalkError):
    code = "too_many_rejected_rows"


class CatalogParseError(TableTalkError):
    code = "catalog_parse_error"


class DuplicateColumn(TableTalkError):
    code = "duplicate_column"


class SynonymCollision(TableTalkError):
    code = "synonym_collision"


class CodebookNaOverlap(TableTalkError):
    code = "codebook_na_overlap"


class AstParseError(TableTalkError):
    code = "ast_parse_error"


class InvalidTracePath(TableTalkError):
    code = "invalid_trace_path"


class MissingSlot(TableTalkError):
    code = "missing_slot"

    def __init__(self, missing: list[str]):
        self.missing = list(missing)
        super().__init__(f"missing slots: {', '.join(self.missing)}")


class KindMismatch(TableTalkError):
    code = "kind_mismatch"


class EmptyAfterFilter(TableTalkError):
    code = "empty_after_filter"


class NonNumericColumn(TableTalkError):
    code = "non_numeric_column"


class EmptyColumn(TableTalkError):
    code = "empty_column"


class ShapeMismatch(TableTalkError):
    code = "shape_mismatch"


class SessionNotFound(TableTalkError):
    code = "session_not_found"


class StaleSequence(TableTalkError):
    code = "stale_sequence"


class DanglingReference(TableTalkError):
    code = "dangling_reference"
