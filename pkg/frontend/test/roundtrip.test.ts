// Scripted pointer session -> /recognize payload -> overlay, with the
// service faked at the fetch boundary.  Checks the acceptance round-trip
// properties: the payload carries exactly the captured events and the
// overlay draws one polyline per stroke.

import { describe, expect, it } from "vitest";

import { CaptureSession, type PointerLike } from "../src/capture.js";
import { RecognitionClient } from "../src/client.js";
import { renderOverlay, type Draw2D } from "../src/overlay.js";
import type { RecognizePayload } from "../src/types.js";

function ev(kind: PointerLike["kind"], x: number, y: number, tMs: number, pressure = 0.5): PointerLike {
  return { x, y, timeStampMs: tMs, pressure, kind };
}

function scriptedSession(): CaptureSession {
  const s = new CaptureSession();
  // stroke 1: a horizontal drag
  s.handle(ev("down", 0, 100, 0));
  for (let i = 1; i <= 20; i++) s.handle(ev("move", i * 5, 100, i * 16));
  s.handle(ev("up", 105, 100, 21 * 16, 0));
  // stroke 2: a vertical drag
  s.handle(ev("down", 50, 40, 400));
  for (let i = 1; i <= 20; i++) s.handle(ev("move", 50, 40 + i * 5, 400 + i * 16));
  s.handle(ev("up", 50, 145, 400 + 21 * 16, 0));
  return s;
}

class CountingCtx implements Draw2D {
  strokeStyle = "";
  fillStyle = "";
  lineWidth = 0;
  font = "";
  strokes = 0;
  fills = 0;
  beginPath() {}
  moveTo() {}
  lineTo() {}
  stroke() {
    this.strokes++;
  }
  arc() {}
  fill() {
    this.fills++;
  }
  fillRect() {}
  clearRect() {}
  fillText() {}
  setLineDash() {}
}

function fakeService(): { fetchFn: typeof fetch; seen: { body?: any } } {
  const seen: { body?: any } = {};
  const fetchFn = (async (url: any, init?: any) => {
    if (String(url).endsWith("/health")) {
      return new Response(JSON.stringify({ version: "test" }), { status: 200 });
    }
    const body = JSON.parse(init.body as string);
    seen.body = body;
    if (!body.points || body.points.length === 0) {
      return new Response(JSON.stringify({ detail: "empty" }), { status: 400 });
    }
    const ts = body.points.map((p: any) => p.t);
    // two stroke records spanning the two pen-down runs
    const payload: RecognizePayload = {
      strokes: [0, 1].map((i) => ({
        m1: { x: -0.5, y: 0 },
        m2: { x: 0, y: 0.2 },
        m3: { x: 0.5, y: 0 },
        h: { x: 0, y: 0 },
        theta: i === 0 ? 0 : Math.PI / 2,
        degenerate: false,
        beta: {
          p: 2, q: 2,
          t0: i === 0 ? ts[0] : ts[22],
          t1: i === 0 ? ts[21] : ts[ts.length - 1],
          amp: 1,
        },
        arc: { a: 1, b: 0.5, x0: 0, y0: 0, theta: 0 },
        epc: i === 0 ? [1, 0, 0, 0] : [0, 0, 1, 0],
      })),
      bpc: [
        { name: "Valley", span: [0, 1] },
        { name: "Shaft", span: [1, 2] },
      ],
      equation: "handwriting={Valley[V],Shaft[S]}",
      label: "d7",
      confidence: 0.85,
      log_confidence: Math.log(0.85),
    };
    return new Response(JSON.stringify(payload), { status: 200 });
  }) as unknown as typeof fetch;
  return { fetchFn, seen };
}

describe("capture -> service -> overlay round trip", () => {
  it("sends exactly the captured events and draws one polyline per stroke", async () => {
    const session = scriptedSession();
    const captured = session.points.length;
    expect(captured).toBe(44); // 2 x (down + 20 moves + up)
    expect(session.penStrokeCount()).toBe(2);

    const { fetchFn, seen } = fakeService();
    const client = new RecognitionClient("http://svc", fetchFn);
    const payload = await client.recognize(session.points);

    expect(seen.body.points.length).toBe(captured);
    for (let i = 0; i < captured; i++) {
      expect(Math.abs(seen.body.points[i].x - session.points[i].x)).toBeLessThanOrEqual(0.5);
      expect(Math.abs(seen.body.points[i].y - session.points[i].y)).toBeLessThanOrEqual(0.5);
    }

    const ctx = new CountingCtx();
    const stats = renderOverlay(ctx, payload, session.points, 640, 420);
    expect(stats.polylines).toBe(payload.strokes.length);
    expect(ctx.strokes).toBe(2);
  });

  it("rejects a second concurrent finalize", async () => {
    const { fetchFn } = fakeService();
    const client = new RecognitionClient("http://svc", fetchFn);
    const session = scriptedSession();
    const first = client.recognize(session.points);
    await expect(client.recognize(session.points)).rejects.toThrow(/in flight/);
    await first;
  });

  it("surfaces service errors", async () => {
    const { fetchFn } = fakeService();
    const client = new RecognitionClient("http://svc", fetchFn);
    await expect(client.recognize([])).rejects.toThrow(/400/);
  });
});
