/** Scripted authoring session against a running service: reproduces the
 * poll-flow authoring gestures (click the Poll button, generate the
 * starting stage, open the pane, drag-select it, unselect Create, generate
 * the composing stage, connect the stages) and prints the exported flow
 * file to stdout. Used by the automated round-trip check and as a smoke
 * test for the client modules outside a browser.
 *
 * Usage: node dist/headless.js http://127.0.0.1:8030 [app_id]
 */

import { ServiceClient, tapAction } from "./api.js";
import { FlowGraphDraft } from "./flowgraph.js";
import { SelectionState } from "./selection.js";
import type { FrameNode, MirrorFrame } from "./types.js";
import { walk } from "./wireframe.js";

function findNode(
  frame: MirrorFrame,
  predicate: (node: FrameNode) => boolean,
): FrameNode {
  for (const { node } of walk(frame.tree.root)) {
    if (predicate(node)) return node;
  }
  throw new Error("node not found in frame");
}

function center(node: FrameNode): [number, number] {
  const [left, top, width, height] = node.bounds;
  return [left + width / 2, top + height / 2];
}

async function main(): Promise<void> {
  const baseUrl = process.argv[2];
  if (!baseUrl) {
    throw new Error("usage: node dist/headless.js <service-url> [app_id]");
  }
  const appId = process.argv[3] ?? "chatpoll";
  const client = new ServiceClient(baseUrl);

  const created = await client.createSession(appId);
  const selection = new SelectionState(created.session_id);
  selection.syncFrame(created.frame);

  // stage 1: click the Poll button, tap action kind, generate
  const poll = findNode(
    created.frame,
    (n) => n.class === "Button" && n.text === "Poll",
  );
  const [pollX, pollY] = center(poll);
  const clickedId = selection.clickAt(pollX, pollY);
  selection.setKind(clickedId, "Tap");
  const starting = await client.generateStage(
    created.session_id,
    selection.stageRequest("starting-poll"),
  );

  // perform the tap for real so the mirrored screen advances to the pane
  selection.clear();
  const stepped = await client.postAction(created.session_id, tapAction(pollX, pollY));
  selection.syncFrame(stepped.frame);

  // stage 2: drag a rectangle over the composition pane, then unselect the
  // terminating Create button with a click
  const createBtn = findNode(
    stepped.frame,
    (n) => n.class === "Button" && n.text === "Create",
  );
  const [createX, createY] = center(createBtn);
  selection.dragSelect({ left: 5, top: 5, width: 310, height: 160 });
  selection.clickAt(createX, createY);
  const composing = await client.generateStage(
    created.session_id,
    selection.stageRequest("composing-poll"),
  );

  const draft = new FlowGraphDraft("create-poll-ui");
  draft.addStage(starting.stage);
  draft.addStage(composing.stage);
  draft.connect("starting-poll", "composing-poll");
  draft.setStarting("starting-poll");
  process.stdout.write(draft.exportText());
}

main().catch((exc) => {
  console.error(String(exc));
  process.exit(1);
});
