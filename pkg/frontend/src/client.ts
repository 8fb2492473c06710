// Service client: one-shot REST recognition plus the streaming channel.

import { buildRecognizePayload } from "./capture.js";
import type { InkPoint, RecognizePayload, StrokeRecord } from "./types.js";

export class RecognitionClient {
  private inFlight = false;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch.bind(globalThis),
  ) {}

  async health(): Promise<{ version: string }> {
    const res = await this.fetchFn(`${this.baseUrl}/health`);
    if (!res.ok) throw new Error(`health check failed: ${res.status}`);
    return res.json();
  }

  // at most one finalize request runs at a time; concurrent calls reject
  async recognize(points: readonly InkPoint[]): Promise<RecognizePayload> {
    if (this.inFlight) throw new Error("a recognition request is already in flight");
    this.inFlight = true;
    try {
      const res = await this.fetchFn(`${this.baseUrl}/recognize`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(buildRecognizePayload(points)),
      });
      if (!res.ok) {
        const detail = await res.text();
        throw new Error(`recognize failed (${res.status}): ${detail}`);
      }
      return res.json();
    } finally {
      this.inFlight = false;
    }
  }
}

export interface StreamHandlers {
  onStroke?: (s: StrokeRecord) => void;
  onFinal?: (p: RecognizePayload) => void;
  onError?: (message: string) => void;
}

// WebSocket /stream session: forward points as they come, send
// {"end": true} to finalize.  Capture never blocks on the socket.
export class StreamSession {
  private ws: WebSocket;
  private queue: string[] = [];
  private open = false;

  constructor(baseUrl: string, handlers: StreamHandlers, wsCtor: typeof WebSocket = WebSocket) {
    const url = baseUrl.replace(/^http/, "ws").replace(/\/$/, "") + "/stream";
    this.ws = new wsCtor(url);
    this.ws.onopen = () => {
      this.open = true;
      for (const frame of this.queue) this.ws.send(frame);
      this.queue.length = 0;
    };
    this.ws.onmessage = (ev) => {
      let msg: any;
      try {
        msg = JSON.parse(ev.data as string);
      } catch {
        return;
      }
      if (msg.stroke) handlers.onStroke?.(msg.stroke);
      if (msg.final) handlers.onFinal?.(msg.final);
      if (msg.error) handlers.onError?.(msg.error);
    };
    this.ws.onerror = () => handlers.onError?.("stream connection error");
  }

  private send(frame: unknown): void {
    const data = JSON.stringify(frame);
    if (this.open) this.ws.send(data);
    else this.queue.push(data);
  }

  sendPoint(p: InkPoint): void {
    this.send(p);
  }

  finalize(): void {
    this.send({ end: true });
  }

  close(): void {
    this.ws.close();
  }
}
