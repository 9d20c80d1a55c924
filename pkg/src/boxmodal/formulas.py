"""Modal formula syntax tree and a small recursive-descent parser.

Grammar (tightest first): unary ``~`` ``<>`` ``[]``, then ``&``, then ``|``,
then right-associative ``->``.  Variables match [a-zA-Z][a-zA-Z0-9_]*;
``true`` and ``false`` are constants.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    sub: Formula


@dataclass(frozen=True)
class Box(Formula):
    sub: Formula


TRUE = Const(True)
FALSE = Const(False)

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<diamond><>)|(?P<boxop>\[\])|(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)"
    r"|(?P<punct>[~&|()]))"
)


def _tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", len(text) - len(stripped))
        kind = m.lastgroup
        assert kind is not None
        yield kind, m.group(kind), m.start(kind)
        pos = m.end()
    yield "end", "", len(text)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.index = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def parse(self) -> Formula:
        f = self.implies()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos)
        return f

    def implies(self) -> Formula:
        left = self.disjunct()
        if self.peek()[0] == "arrow":
            self.advance()
            return Implies(left, self.implies())
        return left

    def disjunct(self) -> Formula:
        f = self.conjunct()
        while self.peek()[:2] == ("punct", "|"):
            self.advance()
            f = Or(f, self.conjunct())
        return f

    def conjunct(self) -> Formula:
        f = self.unary()
        while self.peek()[:2] == ("punct", "&"):
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "punct" and value == "~":
            self.advance()
            return Not(self.unary())
        if kind == "diamond":
            self.advance()
            return Diamond(self.unary())
        if kind == "boxop":
            self.advance()
            return Box(self.unary())
        if kind == "punct" and value == "(":
            self.advance()
            f = self.implies()
            kind, value, pos = self.advance()
            if (kind, value) != ("punct", ")"):
                raise ParseError("expected ')'", pos)
            return f
        if kind == "ident":
            self.advance()
            if value == "true":
                return TRUE
            if value == "false":
                return FALSE
            return Var(value)
        raise ParseError(f"expected a formula, found {value!r}" if value else "unexpected end of input", pos)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


def format_formula(f: Formula) -> str:
    """Render with minimal parentheses, re-parsable by parse_formula."""

    def go(node: Formula, level: int) -> str:
        # level: 0 implies, 1 or, 2 and, 3 unary
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Const):
            return "true" if node.value else "false"
        if isinstance(node, Not):
            return "~" + go(node.sub, 3)
        if isinstance(node, Diamond):
            return "<>" + go(node.sub, 3)
        if isinstance(node, Box):
            return "[]" + go(node.sub, 3)
        if isinstance(node, And):
            text = f"{go(node.left, 2)} & {go(node.right, 3)}"
            return f"({text})" if level > 2 else text
        if isinstance(node, Or):
            text = f"{go(node.left, 1)} | {go(node.right, 2)}"
            return f"({text})" if level > 1 else text
        if isinstance(node, Implies):
            text = f"{go(node.left, 1)} -> {go(node.right, 0)}"
            return f"({text})" if level > 0 else text
        raise TypeError(f"not a formula node: {node!r}")

    return go(f, 0)


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas in post-order (children before parents)."""
    seen: dict[Formula, None] = {}

    def walk(node: Formula) -> None:
        if node in seen:
            return
        if isinstance(node, (Not, Diamond, Box)):
            walk(node.sub)
        elif isinstance(node, (And, Or, Implies)):
            walk(node.left)
            walk(node.right)
        seen[node] = None

    walk(f)
    return list(seen)


def variables(f: Formula) -> frozenset[str]:
    return frozenset(n.name for n in subformulas(f) if isinstance(n, Var))


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Var, Const)):
        return 0
    if isinstance(f, (Diamond, Box)):
        return 1 + modal_depth(f.sub)
    if isinstance(f, Not):
        return modal_depth(f.sub)
    return max(modal_depth(f.left), modal_depth(f.right))


def constant_growth(f: Formula) -> int:
    """Upper bound on how much formula evaluation can raise region bounds.

    Complement moves a finite bound by one; a box operator is a complemented
    diamond of a complement, so it counts twice.
    """
    total = 0
    for node in subformulas(f):
        if isinstance(node, (Not, Implies)):
            total += 1
        elif isinstance(node, Box):
            total += 2
    return total
