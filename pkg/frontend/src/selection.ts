/** Element selection over the latest mirror frame: click toggles one node,
 * a drag rectangle adds every intersecting topmost node. Selected ids are
 * re-validated against each incoming frame. */

import type { FrameNode, MirrorFrame, Rect, StageFragment } from "./types.js";
import { hitTest, intersect, nodesById } from "./wireframe.js";

export class SelectionState {
  readonly sessionId: string;
  /** Insertion-ordered; order is preserved into generated stage filters. */
  selected: string[] = [];
  kinds: Record<string, string> = {};
  staged: StageFragment[] = [];
  private frame: MirrorFrame | null = null;

  constructor(sessionId: string) {
    this.sessionId = sessionId;
  }

  /** Adopt a new frame; selections referring to vanished ids are dropped. */
  syncFrame(frame: MirrorFrame): void {
    if (frame.session_id !== this.sessionId) {
      throw new Error(
        `frame for session ${frame.session_id}, selection for ${this.sessionId}`
      );
    }
    // ids are assigned per frame in document order, so an id from another
    // screen may exist yet name a different element; never carry a
    // selection across screens
    if (this.frame !== null && this.frame.tree.screen_id !== frame.tree.screen_id) {
      this.clear();
    }
    this.frame = frame;
    const known = nodesById(frame.tree.root);
    this.selected = this.selected.filter((id) => known.has(id));
    for (const id of Object.keys(this.kinds)) {
      if (!known.has(id)) delete this.kinds[id];
    }
  }

  private requireFrame(): MirrorFrame {
    if (this.frame === null) throw new Error("no frame synced yet");
    return this.frame;
  }

  node(id: string): FrameNode {
    const node = nodesById(this.requireFrame().tree.root).get(id);
    if (node === undefined) throw new Error(`unknown node id '${id}'`);
    return node;
  }

  isSelected(id: string): boolean {
    return this.selected.includes(id);
  }

  /** Click behavior: select an unselected node, unselect a selected one. */
  toggle(id: string): void {
    this.node(id); // id must exist in the latest frame
    const at = this.selected.indexOf(id);
    if (at >= 0) {
      this.selected.splice(at, 1);
      delete this.kinds[id];
    } else {
      this.selected.push(id);
    }
  }

  /** Click at screen coordinates: resolves the topmost node and toggles it. */
  clickAt(x: number, y: number): string {
    const node = hitTest(this.requireFrame().tree, x, y);
    this.toggle(node.id);
    return node.id;
  }

  /** Rubber-band selection: every node whose bounds intersect the rectangle
   * and which is the topmost element at the center of that intersection.
   * Already-selected nodes stay selected. */
  dragSelect(rect: Rect): string[] {
    const frame = this.requireFrame();
    const added: string[] = [];
    for (const [id, node] of nodesById(frame.tree.root)) {
      const [left, top, width, height] = node.bounds;
      const overlap = intersect(rect, { left, top, width, height });
      if (overlap === null) continue;
      const cx = overlap.left + overlap.width / 2;
      const cy = overlap.top + overlap.height / 2;
      if (hitTest(frame.tree, cx, cy).id !== id) continue;
      if (!this.selected.includes(id)) {
        this.selected.push(id);
        added.push(id);
      }
    }
    return added;
  }

  setKind(id: string, kind: string): void {
    if (!this.selected.includes(id)) {
      throw new Error(`node '${id}' is not selected`);
    }
    this.kinds[id] = kind;
  }

  clear(): void {
    this.selected = [];
    this.kinds = {};
  }

  /** Request body for the service's stage-generation endpoint. */
  stageRequest(stageId: string, next: string[] = []): {
    selected: string[];
    kinds: Record<string, string>;
    stage_id: string;
    next: string[];
  } {
    if (this.selected.length === 0) throw new Error("empty selection");
    return {
      selected: [...this.selected],
      kinds: { ...this.kinds },
      stage_id: stageId,
      next: [...next],
    };
  }
}
