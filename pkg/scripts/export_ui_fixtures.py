"""Export shared UI fixtures for the frontend test suite.

Writes frontend/test/fixtures/ui_fixtures.json with:
  - the chatpoll chat and poll_pane screens serialized with node ids, the
    same shape the mirror WebSocket streams, plus their digests
  - a synthetic tree of overlapping, z-stacked elements
  - a hit-test oracle: sampled points with the node id the engine resolves,
    so the client-side picker can be checked against the engine's rules

Usage: python3 scripts/export_ui_fixtures.py
"""

import json
import os
import sys
import tempfile

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, os.path.join(ROOT, "src"))

from flowreco.service import tree_with_ids  # noqa: E402
from flowreco.simapp import AppSession, load_app_spec  # noqa: E402
from flowreco.viewtree import (  # noqa: E402
    Bounds,
    ViewNode,
    ViewTree,
    hit_test,
    snapshot_digest,
    validate_tree,
)


def overlap_tree() -> ViewTree:
    """Overlapping siblings with z-index and document-order ties."""

    def node(cls, bounds, z=0, text=None, children=()):
        return ViewNode(
            class_name=cls,
            resource_id=None,
            text=text,
            editable=False,
            bounds=Bounds(*bounds),
            z_index=z,
            children=tuple(children),
        )

    root = node(
        "Layout",
        (0, 0, 200, 200),
        children=[
            node("Button", (20, 20, 100, 100), z=0, text="under"),
            node("Button", (60, 60, 100, 100), z=2, text="raised"),
            node("Button", (60, 60, 100, 100), z=2, text="tie-later"),
            node(
                "Layout",
                (10, 150, 180, 40),
                z=0,
                children=[node("TextView", (20, 155, 60, 20), z=5, text="deep")],
            ),
        ],
    )
    tree = ViewTree(root, 200, 200, screen_id="overlap")
    validate_tree(tree)
    return tree


def oracle_points(tree):
    ids = {id(n): f"n{i}" for i, n in enumerate(tree.root.walk())}
    points = []
    xs = list(range(0, int(tree.screen_width), 16))
    ys = list(range(0, int(tree.screen_height), 16))
    for x in xs:
        for y in ys:
            points.append(
                {"x": x, "y": y, "id": ids[id(hit_test(tree, x, y))]}
            )
    for node in tree.root.walk():
        b = node.bounds
        cx, cy = b.left + b.width / 2, b.top + b.height / 2
        if 0 <= cx < tree.screen_width and 0 <= cy < tree.screen_height:
            points.append(
                {"x": cx, "y": cy, "id": ids[id(hit_test(tree, cx, cy))]}
            )
    return points


def main():
    spec = load_app_spec(os.path.join(ROOT, "fixtures", "apps", "chatpoll.json"))
    out = {"screens": {}, "hit_oracle": {}}
    with tempfile.TemporaryDirectory() as tmp:
        session = AppSession(spec, tmp)
        for screen in ("chat", "poll_pane"):
            session.current_screen = screen
            tree = session.tree
            out["screens"][screen] = {
                "frame": tree_with_ids(tree),
                "digest": snapshot_digest(tree),
            }
            out["hit_oracle"][screen] = oracle_points(tree)
    tree = overlap_tree()
    out["screens"]["overlap"] = {
        "frame": tree_with_ids(tree),
        "digest": snapshot_digest(tree),
    }
    out["hit_oracle"]["overlap"] = oracle_points(tree)

    dest = os.path.join(ROOT, "frontend", "test", "fixtures", "ui_fixtures.json")
    os.makedirs(os.path.dirname(dest), exist_ok=True)
    with open(dest, "w", encoding="utf-8") as fh:
        json.dump(out, fh, indent=2, sort_keys=True)
        fh.write("\n")
    n_points = sum(len(v) for v in out["hit_oracle"].values())
    print(f"wrote {dest} ({len(out['screens'])} screens, {n_points} oracle points)")


if __name__ == "__main__":
    main()
