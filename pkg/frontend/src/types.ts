/** Wire types mirrored from the flowreco service's HTTP/WebSocket API. */

export type Bounds = [left: number, top: number, width: number, height: number];

export interface FrameNode {
  id: string;
  class: string;
  resource_id: string | null;
  text: string | null;
  editable: boolean;
  bounds: Bounds;
  z: number;
  children: FrameNode[];
}

export interface FrameTree {
  screen_id: string;
  width: number;
  height: number;
  root: FrameNode;
}

export interface TrackerInfo {
  flow_id: string;
  state: string;
  stage: string | null;
  records: number;
}

export interface MirrorFrame {
  session_id: string;
  seq: number;
  app_id: string;
  status: string;
  digest: string;
  tree: FrameTree;
  trackers: TrackerInfo[];
}

export interface FlowFilter {
  vpath: string;
  kind: string;
}

export interface StageFragment {
  id: string;
  filters: FlowFilter[];
  next: string[];
}

export interface FlowDoc {
  flow_id: string;
  stages: StageFragment[];
  starting: string;
  prologue: unknown[];
}

export interface UIActionBody {
  kind: "Tap" | "LongPress" | "TypeText" | "Drag" | "Back";
  events: [number, number, string][];
  text?: string | null;
  at?: number;
}

export interface Rect {
  left: number;
  top: number;
  width: number;
  height: number;
}
