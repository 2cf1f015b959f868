/** Browser entry point: wires the wireframe canvas, selection gestures,
 * stage generation, the flow-graph panel and the live tracker display to
 * the service. All state is local to the page; one WebSocket per session. */

import { ApiError, ServiceClient, tapAction, typeTextAction } from "./api.js";
import { FlowGraphDraft, FlowGraphError } from "./flowgraph.js";
import { MirrorClient, type SocketLike } from "./mirror.js";
import { SelectionState } from "./selection.js";
import type { MirrorFrame, Rect } from "./types.js";
import { renderBoxes } from "./wireframe.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) throw new Error(`missing element #${id}`);
  return found as T;
}

const canvas = el<HTMLDivElement>("canvas");
const statusLine = el<HTMLDivElement>("status");
const trackerPanel = el<HTMLDivElement>("trackers");
const previewPanel = el<HTMLPreElement>("stage-preview");
const graphPanel = el<HTMLTextAreaElement>("graph-text");
const appSelect = el<HTMLSelectElement>("app-select");
const stageIdInput = el<HTMLInputElement>("stage-id");
const connectFrom = el<HTMLInputElement>("connect-from");
const connectTo = el<HTMLInputElement>("connect-to");
const flowIdInput = el<HTMLInputElement>("flow-id");
const typeTextInput = el<HTMLInputElement>("type-text");

const client = new ServiceClient(window.location.origin.replace(/\/$/, ""));

let sessionId: string | null = null;
let latestFrame: MirrorFrame | null = null;
let selection: SelectionState | null = null;
let draft = new FlowGraphDraft("authored-flow");
let mirror: MirrorClient | null = null;
let dragStart: [number, number] | null = null;

function setStatus(text: string, isError = false): void {
  statusLine.textContent = text;
  statusLine.className = isError ? "error" : "";
}

function describeError(exc: unknown): string {
  if (exc instanceof ApiError) return exc.detail;
  return String(exc);
}

function redraw(): void {
  if (latestFrame === null || selection === null) return;
  canvas.innerHTML = "";
  canvas.style.width = `${latestFrame.tree.width}px`;
  canvas.style.height = `${latestFrame.tree.height}px`;
  for (const box of renderBoxes(latestFrame, new Set(selection.selected))) {
    const div = document.createElement("div");
    div.className = "box" + (box.selected ? " selected" : "");
    div.style.left = `${box.bounds.left}px`;
    div.style.top = `${box.bounds.top}px`;
    div.style.width = `${box.bounds.width}px`;
    div.style.height = `${box.bounds.height}px`;
    div.title = box.label;
    div.textContent = box.label;
    div.dataset.nodeId = box.id;
    canvas.appendChild(div);
  }
  trackerPanel.innerHTML = "";
  for (const tracker of latestFrame.trackers) {
    const row = document.createElement("div");
    row.textContent =
      `${tracker.flow_id}: ${tracker.state}` +
      (tracker.stage === null ? "" : ` @ ${tracker.stage}`) +
      ` (${tracker.records} records)`;
    trackerPanel.appendChild(row);
  }
  setStatus(
    `session ${latestFrame.session_id} seq ${latestFrame.seq} ` +
      `screen ${latestFrame.tree.screen_id} status ${latestFrame.status}`,
  );
}

function adoptFrame(frame: MirrorFrame): void {
  latestFrame = frame;
  selection?.syncFrame(frame);
  redraw();
}

async function startSession(): Promise<void> {
  const appId = appSelect.value;
  const created = await client.createSession(appId);
  sessionId = created.session_id;
  selection = new SelectionState(sessionId);
  mirror?.close();
  mirror = new MirrorClient(
    client.mirrorUrl(sessionId),
    {
      onFrame: adoptFrame,
      onClose: () => setStatus("mirror disconnected", true),
      onResync: (missed) => setStatus(`re-synced after ${missed} dropped frames`),
    },
    nativeSocket,
  );
  adoptFrame(created.frame);
}

function nativeSocket(url: string): SocketLike {
  const ws = new WebSocket(url);
  const like: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onmessage: null,
    onclose: null,
    onerror: null,
  };
  ws.onmessage = (event) => like.onmessage?.({ data: String(event.data) });
  ws.onclose = () => like.onclose?.();
  ws.onerror = (event) => like.onerror?.(event);
  return like;
}

function canvasPoint(event: MouseEvent): [number, number] {
  const rect = canvas.getBoundingClientRect();
  return [event.clientX - rect.left, event.clientY - rect.top];
}

canvas.addEventListener("mousedown", (event) => {
  dragStart = canvasPoint(event);
});

canvas.addEventListener("mouseup", (event) => {
  if (selection === null || dragStart === null) return;
  const [x0, y0] = dragStart;
  const [x1, y1] = canvasPoint(event);
  dragStart = null;
  try {
    if (Math.abs(x1 - x0) < 4 && Math.abs(y1 - y0) < 4) {
      selection.clickAt(x0, y0);
    } else {
      const rect: Rect = {
        left: Math.min(x0, x1),
        top: Math.min(y0, y1),
        width: Math.abs(x1 - x0),
        height: Math.abs(y1 - y0),
      };
      selection.dragSelect(rect);
    }
    redraw();
  } catch (exc) {
    setStatus(describeError(exc), true);
  }
});

el<HTMLButtonElement>("btn-session").addEventListener("click", () => {
  startSession().catch((exc) => setStatus(describeError(exc), true));
});

el<HTMLButtonElement>("btn-generate").addEventListener("click", async () => {
  if (sessionId === null || selection === null) return;
  try {
    const response = await client.generateStage(
      sessionId,
      selection.stageRequest(stageIdInput.value || "stage"),
    );
    draft.addStage(response.stage);
    previewPanel.textContent = response.preview;
    graphPanel.value = safeGraphText();
    selection.clear();
    redraw();
  } catch (exc) {
    setStatus(describeError(exc), true);
  }
});

el<HTMLButtonElement>("btn-connect").addEventListener("click", () => {
  try {
    draft.connect(connectFrom.value, connectTo.value);
    if (draft.stageIds().includes(connectFrom.value)) {
      draft.setStarting(connectFrom.value);
    }
    graphPanel.value = safeGraphText();
  } catch (exc) {
    setStatus(describeError(exc), true);
  }
});

el<HTMLButtonElement>("btn-export").addEventListener("click", async () => {
  try {
    draft.flowId = flowIdInput.value || draft.flowId;
    const doc = draft.export();
    graphPanel.value = JSON.stringify(doc, null, 2);
    const saved = await client.saveFlow(doc);
    setStatus(`saved ${saved.flow_ids.join(", ")} to ${saved.path}`);
  } catch (exc) {
    setStatus(describeError(exc), true);
  }
});

el<HTMLButtonElement>("btn-apply-text").addEventListener("click", () => {
  try {
    draft = FlowGraphDraft.fromText(graphPanel.value);
    setStatus(`draft replaced from edited text (${draft.stageIds().length} stages)`);
  } catch (exc) {
    if (exc instanceof FlowGraphError) setStatus(exc.message, true);
    else setStatus(describeError(exc), true);
  }
});

el<HTMLButtonElement>("btn-tap").addEventListener("click", async () => {
  // live-test mode: drive the session through the same action endpoint
  if (sessionId === null || latestFrame === null) return;
  const selected = selection?.selected[0];
  if (selected === undefined) {
    setStatus("select an element to act on", true);
    return;
  }
  const node = selection!.node(selected);
  const [left, top, width, height] = node.bounds;
  const x = left + width / 2;
  const y = top + height / 2;
  const text = typeTextInput.value;
  try {
    const action = node.editable && text ? typeTextAction(x, y, text) : tapAction(x, y);
    const response = await client.postAction(sessionId, action);
    const events = response.tracker_events
      .map((e) => `${e.flow_id}:${e.event}`)
      .join("  ");
    setStatus(events || "no trackers attached");
  } catch (exc) {
    setStatus(describeError(exc), true);
  }
});

function safeGraphText(): string {
  try {
    return draft.exportText();
  } catch {
    // draft not yet exportable (no starting stage); show the partial shape
    return JSON.stringify(
      { flow_id: draft.flowId, stages: draft.stageIds() },
      null,
      2,
    );
  }
}

async function init(): Promise<void> {
  const apps = await client.listApps();
  appSelect.innerHTML = "";
  for (const app of apps) {
    const option = document.createElement("option");
    option.value = app.app_id;
    option.textContent = app.app_id;
    appSelect.appendChild(option);
  }
  setStatus(`${apps.length} apps available`);
}

init().catch((exc) => setStatus(describeError(exc), true));
