/** Wireframe model: flatten a mirror frame into labeled boxes and resolve
 * pointer coordinates the same way the engine does (deepest node wins,
 * then higher z, then later document order). */

import type { FrameNode, FrameTree, MirrorFrame, Rect } from "./types.js";

export interface FlatNode {
  node: FrameNode;
  depth: number;
  docIndex: number;
}

export interface Box {
  id: string;
  label: string;
  bounds: Rect;
  depth: number;
  z: number;
  editable: boolean;
  selected: boolean;
}

export function walk(root: FrameNode): FlatNode[] {
  const out: FlatNode[] = [];
  const visit = (node: FrameNode, depth: number) => {
    out.push({ node, depth, docIndex: out.length });
    for (const child of node.children) visit(child, depth + 1);
  };
  visit(root, 0);
  return out;
}

export function nodesById(root: FrameNode): Map<string, FrameNode> {
  const map = new Map<string, FrameNode>();
  for (const { node } of walk(root)) map.set(node.id, node);
  return map;
}

function contains(node: FrameNode, x: number, y: number): boolean {
  const [left, top, width, height] = node.bounds;
  return left <= x && x < left + width && top <= y && y < top + height;
}

/** Resolve the node a pointer coordinate lands on; must agree with the
 * engine's resolution on shared fixtures. */
export function hitTest(tree: FrameTree, x: number, y: number): FrameNode {
  if (!(x >= 0 && x < tree.width && y >= 0 && y < tree.height)) {
    throw new RangeError(`point (${x}, ${y}) outside screen bounds`);
  }
  let best: FlatNode | null = null;
  for (const flat of walk(tree.root)) {
    if (!contains(flat.node, x, y)) continue;
    if (
      best === null ||
      flat.depth > best.depth ||
      (flat.depth === best.depth &&
        (flat.node.z > best.node.z ||
          (flat.node.z === best.node.z && flat.docIndex > best.docIndex)))
    ) {
      best = flat;
    }
  }
  if (best === null) throw new Error("no node hit; root must cover the screen");
  return best.node;
}

export function nodeLabel(node: FrameNode): string {
  const parts = [node.class];
  if (node.resource_id !== null) parts.push(`#${node.resource_id}`);
  if (node.text !== null && node.text !== "") parts.push(JSON.stringify(node.text));
  return parts.join(" ");
}

/** Draw list for the wireframe canvas. Boxes are ordered so that later
 * entries paint on top, matching hitTest's tie-breaking. */
export function renderBoxes(frame: MirrorFrame, selected: Set<string>): Box[] {
  const flats = walk(frame.tree.root);
  flats.sort((a, b) =>
    a.depth - b.depth || a.node.z - b.node.z || a.docIndex - b.docIndex
  );
  return flats.map(({ node, depth }) => {
    const [left, top, width, height] = node.bounds;
    return {
      id: node.id,
      label: nodeLabel(node),
      bounds: { left, top, width, height },
      depth,
      z: node.z,
      editable: node.editable,
      selected: selected.has(node.id),
    };
  });
}

export function intersect(a: Rect, b: Rect): Rect | null {
  const left = Math.max(a.left, b.left);
  const top = Math.max(a.top, b.top);
  const right = Math.min(a.left + a.width, b.left + b.width);
  const bottom = Math.min(a.top + a.height, b.top + b.height);
  if (right <= left || bottom <= top) return null;
  return { left, top, width: right - left, height: bottom - top };
}
