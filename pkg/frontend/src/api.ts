/** Thin HTTP client for the flowreco service. */

import type { FlowDoc, MirrorFrame, StageFragment, UIActionBody } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export interface AppInfo {
  app_id: string;
  initial_screen: string;
  screens: string[];
  api_version: string | null;
}

export interface SessionCreated {
  session_id: string;
  frame: MirrorFrame;
}

export interface ActionResponse {
  tracker_events: { flow_id: string; event: string; to_stage: string | null }[];
  result: { screen_id: string; crashed: boolean; crash_reason: string | null };
  frame: MirrorFrame;
}

export interface StageResponse {
  stage: StageFragment;
  preview: string;
}

export interface FlowSaved {
  path: string;
  flow_ids: string[];
}

type FetchLike = typeof fetch;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = (JSON.parse(text) as { detail?: string }).detail ?? text;
      } catch {
        // non-JSON error body; keep the raw text
      }
      throw new ApiError(response.status, detail);
    }
    return JSON.parse(text) as T;
  }

  listApps(): Promise<AppInfo[]> {
    return this.request("GET", "/apps");
  }

  createSession(appId: string, flows?: FlowDoc[]): Promise<SessionCreated> {
    const body: Record<string, unknown> = { app_id: appId };
    if (flows !== undefined) body.flows = flows;
    return this.request("POST", "/sessions", body);
  }

  postAction(sessionId: string, action: UIActionBody): Promise<ActionResponse> {
    return this.request("POST", `/sessions/${sessionId}/action`, action);
  }

  getFrame(sessionId: string): Promise<MirrorFrame> {
    return this.request("GET", `/sessions/${sessionId}/frame`);
  }

  generateStage(
    sessionId: string,
    body: {
      selected: string[];
      kinds?: Record<string, string>;
      stage_id?: string;
      next?: string[];
    },
  ): Promise<StageResponse> {
    return this.request("POST", `/sessions/${sessionId}/stage`, body);
  }

  saveFlow(doc: FlowDoc, filename?: string): Promise<FlowSaved> {
    const body: Record<string, unknown> = { flows: doc };
    if (filename !== undefined) body.filename = filename;
    return this.request("POST", "/flows", body);
  }

  mirrorUrl(sessionId: string): string {
    return (
      this.baseUrl.replace(/^http/, "ws") + `/sessions/${sessionId}/mirror`
    );
  }
}

/** Convenience: a tap at screen coordinates, down then up at one point. */
export function tapAction(x: number, y: number, at = 0): UIActionBody {
  return {
    kind: "Tap",
    events: [
      [x, y, "Down"],
      [x, y, "Up"],
    ],
    at,
  };
}

export function typeTextAction(
  x: number,
  y: number,
  text: string,
  at = 0,
): UIActionBody {
  return {
    kind: "TypeText",
    events: [
      [x, y, "Down"],
      [x, y, "Up"],
    ],
    text,
    at,
  };
}
