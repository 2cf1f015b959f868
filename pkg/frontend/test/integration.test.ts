/** Integration against a live service. Start one with
 *     flowreco serve --port 8030
 * and run `SERVICE_URL=http://127.0.0.1:8030 npx vitest run` to enable. */

import { describe, expect, it } from "vitest";

import { ServiceClient, tapAction } from "../src/api.js";
import { FlowGraphDraft } from "../src/flowgraph.js";
import { SelectionState } from "../src/selection.js";
import { nodesById } from "../src/wireframe.js";

const serviceUrl = process.env.SERVICE_URL;

describe.skipIf(!serviceUrl)("service round trip", () => {
  it("authors the poll flow end to end and saves it", async () => {
    const client = new ServiceClient(serviceUrl!);
    const apps = await client.listApps();
    expect(apps.map((a) => a.app_id)).toContain("chatpoll");

    const created = await client.createSession("chatpoll");
    const selection = new SelectionState(created.session_id);
    selection.syncFrame(created.frame);

    const poll = [...nodesById(created.frame.tree.root).values()].find(
      (n) => n.text === "Poll",
    )!;
    const [left, top, width, height] = poll.bounds;
    const clicked = selection.clickAt(left + width / 2, top + height / 2);
    selection.setKind(clicked, "Tap");
    const starting = await client.generateStage(
      created.session_id,
      selection.stageRequest("starting-poll"),
    );
    expect(starting.stage.filters).toHaveLength(1);
    expect(starting.stage.filters[0]!.vpath).toContain("Poll");

    selection.clear();
    const stepped = await client.postAction(
      created.session_id,
      tapAction(left + width / 2, top + height / 2),
    );
    expect(stepped.result.crashed).toBe(false);
    selection.syncFrame(stepped.frame);

    selection.dragSelect({ left: 5, top: 5, width: 310, height: 160 });
    const createBtn = [...nodesById(stepped.frame.tree.root).values()].find(
      (n) => n.text === "Create",
    )!;
    const [cl, ct, cw, ch] = createBtn.bounds;
    selection.clickAt(cl + cw / 2, ct + ch / 2);
    const composing = await client.generateStage(
      created.session_id,
      selection.stageRequest("composing-poll"),
    );
    expect(
      composing.stage.filters.some((f) => f.vpath.includes("Create")),
    ).toBe(false);

    const draft = new FlowGraphDraft("create-poll-ui");
    draft.addStage(starting.stage);
    draft.addStage(composing.stage);
    draft.connect("starting-poll", "composing-poll");
    draft.setStarting("starting-poll");
    const saved = await client.saveFlow(draft.export(), "create_poll_ui.json");
    expect(saved.flow_ids).toEqual(["create-poll-ui"]);
  });
});
