"""VPath: the XPath-like selector language for naming UI elements.

Grammar (the normative subset; anything else is a parse error):

    query     := ('/' | '//') step (('/' | '//') step)*
    step      := 'view' predicate*
    predicate := '[' conjunction ']' | '[' INTEGER ']'
    conjunction := attr_eq ('and' attr_eq)*
    attr_eq   := '@' ('class' | 'text' | 'resource-id') '=' STRING

'/' selects children, '//' selects descendants at any depth. A leading '//'
therefore means "anywhere in the tree". String literals are double-quoted
with backslash escapes for '"' and '\\'. Positional predicates are 1-based
and filter the nodes surviving earlier predicates of the same step, per
context node (XPath semantics).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .viewtree import ViewNode, ViewTree

ATTRIBUTES = ("class", "text", "resource-id")


class Axis(Enum):
    CHILD = "/"
    DESCENDANT = "//"


@dataclass(frozen=True)
class AttributeEquals:
    attr: str
    value: str


@dataclass(frozen=True)
class PositionIndex:
    n: int  # 1-based


@dataclass(frozen=True)
class And:
    terms: tuple[AttributeEquals, ...]


Predicate = Union[AttributeEquals, PositionIndex, And]


@dataclass(frozen=True)
class Step:
    axis: Axis
    node_test: str  # always "view"
    predicates: tuple[Predicate, ...] = ()


@dataclass(frozen=True)
class VPathQuery:
    steps: tuple[Step, ...]

    def __str__(self) -> str:
        return print_query(self)


class VPathSyntaxError(ValueError):
    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected " + " | ".join(expected) + ")"
        super().__init__(detail)


# --- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message, *expected):
        raise VPathSyntaxError(message, self.pos, tuple(expected))

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def skip_ws(self):
        while not self.eof() and self.text[self.pos] in " \t":
            self.pos += 1

    def take(self, literal: str) -> bool:
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def parse(self) -> VPathQuery:
        steps = []
        axis = self.parse_axis()
        if axis is None:
            self.error("query must begin with an axis", "/", "//")
        while True:
            steps.append(self.parse_step(axis))
            self.skip_ws()
            if self.eof():
                break
            axis = self.parse_axis()
            if axis is None:
                self.error("trailing input after step", "/", "//", "end of input")
        return VPathQuery(tuple(steps))

    def parse_axis(self) -> Optional[Axis]:
        if self.take("//"):
            return Axis.DESCENDANT
        if self.take("/"):
            return Axis.CHILD
        return None

    def parse_step(self, axis: Axis) -> Step:
        if not self.take("view"):
            self.error("unknown node test", "view")
        predicates = []
        while self.take("["):
            predicates.append(self.parse_predicate())
            if not self.take("]"):
                self.error("unterminated predicate", "]")
        return Step(axis, "view", tuple(predicates))

    def parse_predicate(self) -> Predicate:
        self.skip_ws()
        if not self.eof() and self.text[self.pos].isdigit():
            start = self.pos
            while not self.eof() and self.text[self.pos].isdigit():
                self.pos += 1
            n = int(self.text[start : self.pos])
            if n < 1:
                self.pos = start
                self.error("positional index is 1-based", "positive integer")
            self.skip_ws()
            return PositionIndex(n)
        terms = [self.parse_attr_eq()]
        while True:
            self.skip_ws()
            mark = self.pos
            if self.take("and"):
                self.skip_ws()
                terms.append(self.parse_attr_eq())
            else:
                self.pos = mark
                break
        if len(terms) == 1:
            return terms[0]
        return And(tuple(terms))

    def parse_attr_eq(self) -> AttributeEquals:
        if not self.take("@"):
            self.error("expected attribute test", "@", "integer")
        start = self.pos
        while not self.eof() and (self.text[self.pos].isalnum() or self.text[self.pos] == "-"):
            self.pos += 1
        attr = self.text[start : self.pos]
        if attr not in ATTRIBUTES:
            self.pos = start
            self.error(f"unknown attribute '@{attr}'", *ATTRIBUTES)
        self.skip_ws()
        if not self.take("="):
            self.error("expected '='", "=")
        self.skip_ws()
        return AttributeEquals(attr, self.parse_string())

    def parse_string(self) -> str:
        if not self.take('"'):
            self.error("expected string literal", '"')
        out = []
        while True:
            if self.eof():
                self.error("unterminated string literal", '"')
            ch = self.text[self.pos]
            self.pos += 1
            if ch == '"':
                return "".join(out)
            if ch == "\\":
                if self.eof():
                    self.error("dangling escape", '"', "\\")
                esc = self.text[self.pos]
                self.pos += 1
                if esc not in ('"', "\\"):
                    self.pos -= 1
                    self.error(f"unsupported escape '\\{esc}'", '\\"', "\\\\")
                out.append(esc)
            else:
                out.append(ch)


def parse(expr: str) -> VPathQuery:
    return _Parser(expr).parse()


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def _print_predicate(pred: Predicate) -> str:
    if isinstance(pred, PositionIndex):
        return f"[{pred.n}]"
    if isinstance(pred, AttributeEquals):
        return f'[@{pred.attr}="{_escape(pred.value)}"]'
    terms = " and ".join(f'@{t.attr}="{_escape(t.value)}"' for t in pred.terms)
    return f"[{terms}]"


def print_query(query: VPathQuery) -> str:
    """Canonical form; parse(print_query(q)) is structurally equal to q."""
    return "".join(
        step.axis.value + step.node_test + "".join(map(_print_predicate, step.predicates))
        for step in query.steps
    )


# --- evaluator ---------------------------------------------------------------


def _attr_value(node: ViewNode, attr: str) -> Optional[str]:
    if attr == "class":
        return node.class_name
    if attr == "text":
        return node.text
    return node.resource_id


def _matches_attrs(node: ViewNode, pred) -> bool:
    if isinstance(pred, AttributeEquals):
        return _attr_value(node, pred.attr) == pred.value
    return all(_attr_value(node, t.attr) == t.value for t in pred.terms)


def _descendants(node: ViewNode):
    for child in node.children:
        yield child
        yield from _descendants(child)


def evaluate(query: VPathQuery, tree: ViewTree) -> list[ViewNode]:
    """All nodes matching the query, in document order."""
    doc_index = {id(n): i for i, n in enumerate(tree.root.walk())}
    # context None is the virtual document node above the root
    contexts: list[Optional[ViewNode]] = [None]
    for step in query.steps:
        matched: list[ViewNode] = []
        seen: set[int] = set()
        for ctx in contexts:
            if step.axis is Axis.CHILD:
                cands = [tree.root] if ctx is None else list(ctx.children)
            else:
                cands = (
                    list(tree.root.walk()) if ctx is None else list(_descendants(ctx))
                )
            for pred in step.predicates:
                if isinstance(pred, PositionIndex):
                    cands = [cands[pred.n - 1]] if pred.n <= len(cands) else []
                else:
                    cands = [n for n in cands if _matches_attrs(n, pred)]
            for node in cands:
                if id(node) not in seen:
                    seen.add(id(node))
                    matched.append(node)
        contexts = sorted(matched, key=lambda n: doc_index[id(n)])
    return [n for n in contexts if n is not None]


# --- unique selector generation ----------------------------------------------


def _path_to(root: ViewNode, target: ViewNode) -> Optional[list[ViewNode]]:
    if root is target:
        return [root]
    for child in root.children:
        rest = _path_to(child, target)
        if rest is not None:
            return [root] + rest
    return None


def generate_unique(tree: ViewTree, target: ViewNode) -> VPathQuery:
    """Synthesize a query matching exactly `target`.

    Preference order: a unique resource id; then class+text for stable
    (non-editable) text; then an absolute positional path. Editable nodes
    never embed their text, which is ephemeral by definition.
    """
    path = _path_to(tree.root, target)
    if path is None:
        raise ValueError("target is not a node of tree")

    if target.resource_id is not None:
        q = VPathQuery(
            (
                Step(
                    Axis.DESCENDANT,
                    "view",
                    (AttributeEquals("resource-id", target.resource_id),),
                ),
            )
        )
        if _is_sole_match(evaluate(q, tree), target):
            return q

    if target.text is not None and not target.editable:
        q = VPathQuery(
            (
                Step(
                    Axis.DESCENDANT,
                    "view",
                    (
                        And(
                            (
                                AttributeEquals("class", target.class_name),
                                AttributeEquals("text", target.text),
                            )
                        ),
                    ),
                ),
            )
        )
        if _is_sole_match(evaluate(q, tree), target):
            return q

    # absolute positional fallback: always unique by construction
    steps = [Step(Axis.CHILD, "view")]
    for parent, node in zip(path, path[1:]):
        same_class = [c for c in parent.children if c.class_name == node.class_name]
        idx = next(i for i, c in enumerate(same_class) if c is node) + 1
        steps.append(
            Step(
                Axis.CHILD,
                "view",
                (AttributeEquals("class", node.class_name), PositionIndex(idx)),
            )
        )
    q = VPathQuery(tuple(steps))
    result = evaluate(q, tree)
    assert _is_sole_match(result, target), "positional selector failed to isolate target"
    return q


def _is_sole_match(result: list[ViewNode], target: ViewNode) -> bool:
    # identity, not structural equality: twin nodes must not satisfy uniqueness
    return len(result) == 1 and result[0] is target
