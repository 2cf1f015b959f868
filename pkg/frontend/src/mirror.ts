/** WebSocket mirror client. Frames carry strictly increasing sequence
 * numbers; on a gap the client asks the service for a full frame with a
 * "resync" text message. The socket is injected so tests can fake it. */

import type { MirrorFrame } from "./types.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onerror: ((event: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface MirrorHandlers {
  onFrame: (frame: MirrorFrame) => void;
  onClose?: () => void;
  onResync?: (missed: number) => void;
}

export class MirrorClient {
  private socket: SocketLike;
  private lastSeq = -1;
  resyncCount = 0;

  constructor(url: string, handlers: MirrorHandlers, factory: SocketFactory) {
    this.socket = factory(url);
    this.socket.onmessage = (event) => {
      const frame = JSON.parse(event.data) as MirrorFrame;
      // a re-sent full frame may repeat a seq we already have; drop stale ones
      if (frame.seq < this.lastSeq) return;
      if (this.lastSeq >= 0 && frame.seq > this.lastSeq + 1) {
        const missed = frame.seq - this.lastSeq - 1;
        this.resyncCount += 1;
        handlers.onResync?.(missed);
        this.socket.send("resync");
      }
      this.lastSeq = frame.seq;
      handlers.onFrame(frame);
    };
    this.socket.onclose = () => handlers.onClose?.();
    this.socket.onerror = () => handlers.onClose?.();
  }

  /** Manual full-frame refresh, e.g. after the user reconnects a panel. */
  requestResync(): void {
    this.socket.send("resync");
  }

  close(): void {
    this.socket.close();
  }
}
