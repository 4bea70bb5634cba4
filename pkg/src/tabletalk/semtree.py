"""Semantic trees describing what a registered command computes.

Node kinds: command definition, method call, column selection, parameter
reference, literal, return. Trees are immutable; canonical serialization is a
single-line s-expression that round-trips exactly and is injective on valid
trees. Trace tables address nodes by child-index paths from the root; a
column selection exposes its two parameter references as addressable
children so a path can point at the table or column parameter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import AstParseError, InvalidTracePath

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Literal:
    value: int | str


@dataclass(frozen=True)
class ColumnSelect:
    table_param: str
    column_param: str


@dataclass(frozen=True)
class Call:
    method: str
    receiver: "AstNode"
    args: tuple["AstNode", ...] = ()


@dataclass(frozen=True)
class Return:
    expr: "AstNode"


@dataclass(frozen=True)
class CommandDef:
    name: str
    params: tuple[str, ...]
    body: "AstNode"


AstNode = Union[Param, Literal, ColumnSelect, Call, Return, CommandDef]

Path = tuple[int, ...]


def children(node: AstNode) -> tuple[AstNode, ...]:
    if isinstance(node, CommandDef):
        return (node.body,)
    if isinstance(node, Return):
        return (node.expr,)
    if isinstance(node, Call):
        return (node.receiver, *node.args)
    if isinstance(node, ColumnSelect):
        return (Param(node.table_param), Param(node.column_param))
    return ()


def node_at(tree: AstNode, path: Path) -> AstNode:
    node = tree
    for step in path:
        kids = children(node)
        if step < 0 or step >= len(kids):
            raise InvalidTracePath(f"path {path} leaves the tree at step {step}")
        node = kids[step]
    return node


def walk(tree: AstNode):
    """Yield (path, node) in preorder."""
    stack: list[tuple[Path, AstNode]] = [((), tree)]
    while stack:
        path, node = stack.pop()
        yield path, node
        kids = children(node)
        for i in range(len(kids) - 1, -1, -1):
            stack.append(((*path, i), kids[i]))


def referenced_params(tree: AstNode) -> set[str]:
    out = set()
    for _, node in walk(tree):
        if isinstance(node, Param):
            out.add(node.name)
        elif isinstance(node, ColumnSelect):
            out.add(node.table_param)
            out.add(node.column_param)
    return out


def validate(tree: AstNode) -> None:
    """Check identifier shape and, for command definitions, that every
    referenced parameter is declared."""
    for _, node in walk(tree):
        names: tuple[str, ...] = ()
        if isinstance(node, Param):
            names = (node.name,)
        elif isinstance(node, ColumnSelect):
            names = (node.table_param, node.column_param)
        elif isinstance(node, Call):
            names = (node.method,)
        elif isinstance(node, CommandDef):
            names = (node.name, *node.params)
        for name in names:
            if not _IDENT.match(name):
                raise AstParseError(f"invalid identifier {name!r}")
    if isinstance(tree, CommandDef):
        undeclared = referenced_params(tree.body) - set(tree.params)
        if undeclared:
            raise AstParseError(
                f"command {tree.name!r} references undeclared params {sorted(undeclared)}"
            )


# -- canonical serialization -------------------------------------------------


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize(tree: AstNode) -> str:
    """Canonical single-line form; whitespace-stable and injective."""
    if isinstance(tree, Param):
        return f"(param {tree.name})"
    if isinstance(tree, Literal):
        if isinstance(tree.value, bool) or not isinstance(tree.value, (int, str)):
            raise AstParseError(f"unsupported literal {tree.value!r}")
        rendered = str(tree.value) if isinstance(tree.value, int) else _quote(tree.value)
        return f"(lit {rendered})"
    if isinstance(tree, ColumnSelect):
        return f"(column-select (param {tree.table_param}) (param {tree.column_param}))"
    if isinstance(tree, Call):
        parts = [f"(call {tree.method}", serialize(tree.receiver)]
        parts.extend(serialize(a) for a in tree.args)
        return " ".join(parts) + ")"
    if isinstance(tree, Return):
        return f"(return {serialize(tree.expr)})"
    if isinstance(tree, CommandDef):
        params = " ".join(tree.params)
        return f"(command {tree.name} (params {params}) {serialize(tree.body)})"
    raise AstParseError(f"unknown node {tree!r}")


class _Tokens:
    def __init__(self, text: str):
        self.tokens = self._lex(text)
        self.pos = 0

    @staticmethod
    def _lex(text: str) -> list[str]:
        tokens = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch in "()":
                tokens.append(ch)
                i += 1
            elif ch == '"':
                j = i + 1
                buf = []
                while j < len(text):
                    if text[j] == "\\" and j + 1 < len(text):
                        buf.append(text[j + 1])
                        j += 2
                    elif text[j] == '"':
                        break
                    else:
                        buf.append(text[j])
                        j += 1
                else:
                    raise AstParseError("unterminated string literal")
                tokens.append('"' + "".join(buf))
                i = j + 1
            else:
                j = i
                while j < len(text) and not text[j].isspace() and text[j] not in "()":
                    j += 1
                tokens.append(text[i:j])
                i = j
        return tokens

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise AstParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise AstParseError(f"expected {tok!r}, got {got!r}")


def deserialize(text: str) -> AstNode:
    tokens = _Tokens(text)
    tree = _parse_node(tokens)
    if tokens.peek() is not None:
        raise AstParseError(f"trailing input after tree: {tokens.peek()!r}")
    validate(tree)
    return tree


def _parse_node(tokens: _Tokens) -> AstNode:
    tokens.expect("(")
    kind = tokens.next()
    if kind == "param":
        name = tokens.next()
        tokens.expect(")")
        return Param(name)
    if kind == "lit":
        tok = tokens.next()
        tokens.expect(")")
        if tok.startswith('"'):
            return Literal(tok[1:])
        try:
            return Literal(int(tok))
        except ValueError:
            raise AstParseError(f"bad literal token {tok!r}") from None
    if kind == "column-select":
        table = _parse_node(tokens)
        column = _parse_node(tokens)
        tokens.expect(")")
        if not isinstance(table, Param) or not isinstance(column, Param):
            raise AstParseError("column-select children must be params")
        return ColumnSelect(table.name, column.name)
    if kind == "call":
        method = tokens.next()
        receiver = _parse_node(tokens)
        args = []
        while tokens.peek() != ")":
            args.append(_parse_node(tokens))
        tokens.expect(")")
        return Call(method, receiver, tuple(args))
    if kind == "return":
        expr = _parse_node(tokens)
        tokens.expect(")")
        return Return(expr)
    if kind == "command":
        name = tokens.next()
        tokens.expect("(")
        tokens.expect("params")
        params = []
        while tokens.peek() != ")":
            params.append(tokens.next())
        tokens.expect(")")
        body = _parse_node(tokens)
        tokens.expect(")")
        return CommandDef(name, tuple(params), body)
    raise AstParseError(f"unknown node kind {kind!r}")


def serialize_bound(tree: AstNode, bindings: dict[str, int | str]) -> str:
    """Serialization with parameter references replaced by bound literals.

    Provenance text only; bound column selections render their parameters as
    literals, so this form is not meant to be parsed back.
    """
    def sub(node: AstNode) -> str:
        if isinstance(node, Param):
            if node.name in bindings:
                return serialize(Literal(bindings[node.name]))
            return serialize(node)
        if isinstance(node, ColumnSelect):
            parts = [sub(Param(node.table_param)), sub(Param(node.column_param))]
            return f"(column-select {parts[0]} {parts[1]})"
        if isinstance(node, Call):
            parts = [f"(call {node.method}", sub(node.receiver)]
            parts.extend(sub(a) for a in node.args)
            return " ".join(parts) + ")"
        if isinstance(node, Return):
            return f"(return {sub(node.expr)})"
        if isinstance(node, CommandDef):
            params = " ".join(node.params)
            return f"(command {node.name} (params {params}) {sub(node.body)})"
        return serialize(node)

    return sub(tree)
