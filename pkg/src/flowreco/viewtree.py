"""UI tree data model: view nodes, raw UI actions, hit testing, digests.

Trees are immutable value objects shared freely across sessions. The JSON
serialization here is canonical (fixed field order, depth first) and is the
exact byte stream hashed by the digest functions.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional


class Phase(str, Enum):
    DOWN = "Down"
    MOVE = "Move"
    UP = "Up"


class ActionKind(str, Enum):
    TAP = "Tap"
    LONG_PRESS = "LongPress"
    TYPE_TEXT = "TypeText"
    DRAG = "Drag"
    BACK = "Back"


#: Filter-only pseudo kind: matches any non-Back action kind.
ANY_INTERACTION = "AnyInteraction"


@dataclass(frozen=True)
class Bounds:
    left: float
    top: float
    width: float
    height: float

    @property
    def right(self) -> float:
        return self.left + self.width

    @property
    def bottom(self) -> float:
        return self.top + self.height

    def contains(self, x: float, y: float) -> bool:
        return self.left <= x < self.right and self.top <= y < self.bottom

    def encloses(self, other: "Bounds") -> bool:
        return (
            other.left >= self.left
            and other.top >= self.top
            and other.right <= self.right
            and other.bottom <= self.bottom
        )


@dataclass(frozen=True)
class ViewNode:
    class_name: str
    resource_id: Optional[str] = None
    text: Optional[str] = None
    editable: bool = False
    bounds: Bounds = Bounds(0, 0, 0, 0)
    z_index: int = 0
    children: tuple["ViewNode", ...] = ()

    def walk(self) -> Iterator["ViewNode"]:
        """Depth-first pre-order traversal (document order)."""
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class ViewTree:
    root: ViewNode
    screen_width: float
    screen_height: float
    screen_id: str = ""

    def nodes(self) -> list[ViewNode]:
        return list(self.root.walk())


class TreeError(ValueError):
    """Raised when a tree violates the clipping model at load time."""


def validate_tree(tree: ViewTree) -> None:
    root = tree.root
    if (root.bounds.left, root.bounds.top) != (0, 0) or (
        root.bounds.width != tree.screen_width
        or root.bounds.height != tree.screen_height
    ):
        raise TreeError("root bounds must equal the screen rectangle")

    def check(node: ViewNode) -> None:
        for child in node.children:
            if not node.bounds.encloses(child.bounds):
                raise TreeError(
                    f"child bounds {child.bounds} escape parent {node.bounds}"
                )
            check(child)

    check(root)


@dataclass(frozen=True)
class PointerEvent:
    x: float
    y: float
    phase: Phase


@dataclass(frozen=True)
class UIAction:
    kind: ActionKind
    pointer_events: tuple[PointerEvent, ...] = ()
    text_payload: Optional[str] = None
    timestamp: int = 0

    def __post_init__(self):
        if self.kind is ActionKind.BACK and self.pointer_events:
            raise ValueError("Back carries no pointer events")
        if self.kind is ActionKind.TAP:
            phases = [e.phase for e in self.pointer_events]
            if phases != [Phase.DOWN, Phase.UP]:
                raise ValueError("Tap must be exactly Down then Up")
            down, up = self.pointer_events
            if (down.x, down.y) != (up.x, up.y):
                raise ValueError("Tap Down and Up must share coordinates")
        if self.kind is ActionKind.DRAG:
            phases = [e.phase for e in self.pointer_events]
            if (
                len(phases) < 3
                or phases[0] is not Phase.DOWN
                or phases[-1] is not Phase.UP
                or any(p is not Phase.MOVE for p in phases[1:-1])
            ):
                raise ValueError("Drag must be Down, Move+, Up")

    @property
    def anchor(self) -> Optional[tuple[float, float]]:
        """First pointer coordinate, the point used for hit testing."""
        if not self.pointer_events:
            return None
        ev = self.pointer_events[0]
        return (ev.x, ev.y)


def tap(x: float, y: float, timestamp: int = 0) -> UIAction:
    return UIAction(
        ActionKind.TAP,
        (PointerEvent(x, y, Phase.DOWN), PointerEvent(x, y, Phase.UP)),
        timestamp=timestamp,
    )


def type_text(x: float, y: float, text: str, timestamp: int = 0) -> UIAction:
    """Typing is modeled as a focus touch on the field plus the typed payload."""
    return UIAction(
        ActionKind.TYPE_TEXT,
        (PointerEvent(x, y, Phase.DOWN), PointerEvent(x, y, Phase.UP)),
        text_payload=text,
        timestamp=timestamp,
    )


def back(timestamp: int = 0) -> UIAction:
    return UIAction(ActionKind.BACK, (), timestamp=timestamp)


def hit_test(tree: ViewTree, x: float, y: float) -> ViewNode:
    """Resolve the node a raw pointer coordinate lands on.

    The deepest node containing the point wins; among overlapping candidates
    the higher z_index wins, and on a z tie the later sibling (document order)
    wins, i.e. the view "on top". The root is the hit of last resort.
    """
    if not (0 <= x < tree.screen_width and 0 <= y < tree.screen_height):
        raise ValueError(f"point ({x}, {y}) outside screen bounds")

    best = None
    best_key = None
    for doc_index, (node, depth) in enumerate(_walk_with_depth(tree.root, 0)):
        if node.bounds.contains(x, y):
            key = (depth, node.z_index, doc_index)
            if best_key is None or key > best_key:
                best, best_key = node, key
    assert best is not None  # root covers the whole screen
    return best


def _walk_with_depth(node: ViewNode, depth: int):
    yield node, depth
    for child in node.children:
        yield from _walk_with_depth(child, depth + 1)


# --- canonical serialization & digests ---------------------------------------

_FIELDS = ("class", "resource_id", "text", "editable", "bounds", "z", "children")


def node_to_json(node: ViewNode, include_bounds: bool = True) -> dict:
    out = {
        "class": node.class_name,
        "resource_id": node.resource_id,
        "text": node.text,
        "editable": node.editable,
    }
    if include_bounds:
        b = node.bounds
        out["bounds"] = [b.left, b.top, b.width, b.height]
    out["z"] = node.z_index
    out["children"] = [node_to_json(c, include_bounds) for c in node.children]
    return out


def node_from_json(doc: dict) -> ViewNode:
    b = doc.get("bounds", [0, 0, 0, 0])
    return ViewNode(
        class_name=doc["class"],
        resource_id=doc.get("resource_id"),
        text=doc.get("text"),
        editable=bool(doc.get("editable", False)),
        bounds=Bounds(*b),
        z_index=int(doc.get("z", 0)),
        children=tuple(node_from_json(c) for c in doc.get("children", [])),
    )


def tree_to_json(tree: ViewTree, include_bounds: bool = True) -> dict:
    return {
        "screen_id": tree.screen_id,
        "width": tree.screen_width,
        "height": tree.screen_height,
        "root": node_to_json(tree.root, include_bounds),
    }


def tree_from_json(doc: dict, validate: bool = True) -> ViewTree:
    tree = ViewTree(
        root=node_from_json(doc["root"]),
        screen_width=doc["width"],
        screen_height=doc["height"],
        screen_id=doc.get("screen_id", ""),
    )
    if validate:
        validate_tree(tree)
    return tree


def canonical_bytes(tree: ViewTree, include_bounds: bool = True) -> bytes:
    """Deterministic byte serialization; the digest hashes exactly this."""
    doc = tree_to_json(tree, include_bounds)
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def snapshot_digest(tree: ViewTree) -> str:
    """Strict digest: structure, attributes and geometry."""
    return hashlib.sha256(canonical_bytes(tree, include_bounds=True)).hexdigest()


def semantic_digest(tree: ViewTree) -> str:
    """Digest ignoring geometry, for recovery equivalence across screen sizes."""
    return hashlib.sha256(canonical_bytes(tree, include_bounds=False)).hexdigest()
