/** Flow-graph draft: generated stage fragments plus edges and a starting
 * stage, exported as the canonical flow-file JSON the primary loader
 * accepts unchanged. */

import type { FlowDoc, StageFragment } from "./types.js";

export class FlowGraphError extends Error {}

export class FlowGraphDraft {
  flowId: string;
  private stages = new Map<string, StageFragment>();
  private starting: string | null = null;

  constructor(flowId: string) {
    if (!flowId) throw new FlowGraphError("flow id must be non-empty");
    this.flowId = flowId;
  }

  addStage(fragment: StageFragment): void {
    if (this.stages.has(fragment.id)) {
      throw new FlowGraphError(`duplicate stage '${fragment.id}'`);
    }
    this.stages.set(fragment.id, {
      id: fragment.id,
      filters: fragment.filters.map((f) => ({ ...f })),
      next: [...fragment.next],
    });
  }

  removeStage(id: string): void {
    if (!this.stages.delete(id)) throw new FlowGraphError(`unknown stage '${id}'`);
    for (const stage of this.stages.values()) {
      stage.next = stage.next.filter((n) => n !== id);
    }
    if (this.starting === id) this.starting = null;
  }

  connect(from: string, to: string): void {
    const stage = this.stages.get(from);
    if (stage === undefined) throw new FlowGraphError(`unknown stage '${from}'`);
    if (!this.stages.has(to)) throw new FlowGraphError(`unknown stage '${to}'`);
    if (!stage.next.includes(to)) stage.next.push(to);
  }

  disconnect(from: string, to: string): void {
    const stage = this.stages.get(from);
    if (stage === undefined) throw new FlowGraphError(`unknown stage '${from}'`);
    stage.next = stage.next.filter((n) => n !== to);
  }

  setStarting(id: string): void {
    if (!this.stages.has(id)) throw new FlowGraphError(`unknown stage '${id}'`);
    this.starting = id;
  }

  stageIds(): string[] {
    return [...this.stages.keys()];
  }

  /** Canonical flow document; validates the draft is exportable. */
  export(): FlowDoc {
    if (this.starting === null) {
      throw new FlowGraphError("no starting stage set");
    }
    if (this.stages.size === 0) throw new FlowGraphError("flow has no stages");
    for (const stage of this.stages.values()) {
      for (const next of stage.next) {
        if (!this.stages.has(next)) {
          throw new FlowGraphError(
            `stage '${stage.id}' links to unknown stage '${next}'`
          );
        }
      }
    }
    return {
      flow_id: this.flowId,
      stages: [...this.stages.values()].map((s) => ({
        id: s.id,
        filters: s.filters.map((f) => ({ ...f })),
        next: [...s.next],
      })),
      starting: this.starting,
      prologue: [],
    };
  }

  /** The on-disk text form, editable in the raw-text panel. */
  exportText(): string {
    return JSON.stringify(this.export(), null, 2) + "\n";
  }

  /** Replace the draft from edited flow-file text (re-validation happens
   * server-side on save; here we check the document shape). */
  static fromText(text: string): FlowGraphDraft {
    let doc: unknown;
    try {
      doc = JSON.parse(text);
    } catch (exc) {
      throw new FlowGraphError(`not valid JSON: ${exc}`);
    }
    const d = doc as Partial<FlowDoc>;
    if (typeof d.flow_id !== "string" || !Array.isArray(d.stages)) {
      throw new FlowGraphError("document is missing flow_id or stages");
    }
    const draft = new FlowGraphDraft(d.flow_id);
    for (const stage of d.stages) {
      if (typeof stage.id !== "string" || !Array.isArray(stage.filters)) {
        throw new FlowGraphError("stage is missing id or filters");
      }
      draft.addStage({
        id: stage.id,
        filters: stage.filters,
        next: Array.isArray(stage.next) ? stage.next : [],
      });
    }
    if (typeof d.starting === "string" && d.starting) draft.setStarting(d.starting);
    draft.export();
    return draft;
  }
}
