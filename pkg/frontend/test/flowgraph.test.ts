import { describe, expect, it } from "vitest";

import { FlowGraphDraft, FlowGraphError } from "../src/flowgraph.js";
import type { StageFragment } from "../src/types.js";

function stage(id: string, vpaths: string[], next: string[] = []): StageFragment {
  return {
    id,
    filters: vpaths.map((vpath) => ({ vpath, kind: "AnyInteraction" })),
    next,
  };
}

describe("FlowGraphDraft", () => {
  it("composes and exports the poll-flow shape", () => {
    const draft = new FlowGraphDraft("create-poll-ui");
    draft.addStage({
      id: "starting-poll",
      filters: [{ vpath: '//view[@class="Button" and @text="Poll"]', kind: "Tap" }],
      next: [],
    });
    draft.addStage(
      stage("composing-poll", [
        '//view[@resource-id="field_title"]',
        '/view/view[@class="EditText"][2]',
      ]),
    );
    draft.connect("starting-poll", "composing-poll");
    draft.setStarting("starting-poll");
    const doc = draft.export();
    expect(doc).toEqual({
      flow_id: "create-poll-ui",
      stages: [
        {
          id: "starting-poll",
          filters: [
            { vpath: '//view[@class="Button" and @text="Poll"]', kind: "Tap" },
          ],
          next: ["composing-poll"],
        },
        {
          id: "composing-poll",
          filters: [
            { vpath: '//view[@resource-id="field_title"]', kind: "AnyInteraction" },
            { vpath: '/view/view[@class="EditText"][2]', kind: "AnyInteraction" },
          ],
          next: [],
        },
      ],
      starting: "starting-poll",
      prologue: [],
    });
    // exported text round-trips through the raw-text editor path
    expect(FlowGraphDraft.fromText(draft.exportText()).export()).toEqual(doc);
  });

  it("edges are deduplicated and disconnectable", () => {
    const draft = new FlowGraphDraft("f");
    draft.addStage(stage("a", ["/view"]));
    draft.addStage(stage("b", ["/view"]));
    draft.connect("a", "b");
    draft.connect("a", "b");
    draft.setStarting("a");
    expect(draft.export().stages[0]!.next).toEqual(["b"]);
    draft.disconnect("a", "b");
    expect(draft.export().stages[0]!.next).toEqual([]);
  });

  it("removing a stage prunes its incoming edges and starting mark", () => {
    const draft = new FlowGraphDraft("f");
    draft.addStage(stage("a", ["/view"], []));
    draft.addStage(stage("b", ["/view"]));
    draft.connect("a", "b");
    draft.setStarting("b");
    draft.removeStage("b");
    expect(draft.stageIds()).toEqual(["a"]);
    expect(() => draft.export()).toThrow(/no starting stage/);
  });

  it("rejects invalid drafts", () => {
    expect(() => new FlowGraphDraft("")).toThrow(FlowGraphError);
    const draft = new FlowGraphDraft("f");
    expect(() => draft.setStarting("a")).toThrow(/unknown stage/);
    draft.addStage(stage("a", ["/view"]));
    expect(() => draft.addStage(stage("a", ["/view"]))).toThrow(/duplicate/);
    expect(() => draft.connect("a", "zz")).toThrow(/unknown stage/);
    draft.addStage(stage("dangling", ["/view"], ["nowhere"]));
    draft.setStarting("a");
    expect(() => draft.export()).toThrow(/unknown stage 'nowhere'/);
  });

  it("rejects malformed edited text", () => {
    expect(() => FlowGraphDraft.fromText("not json")).toThrow(/not valid JSON/);
    expect(() => FlowGraphDraft.fromText("{}")).toThrow(/missing flow_id/);
    expect(() =>
      FlowGraphDraft.fromText(
        JSON.stringify({ flow_id: "f", stages: [{ id: "a" }] }),
      ),
    ).toThrow(/missing id or filters/);
  });
});
