import { describe, expect, it } from "vitest";

import { buildRecognizePayload, CaptureSession, type PointerLike } from "../src/capture.js";

function ev(kind: PointerLike["kind"], x: number, y: number, tMs: number, pressure = 0.5): PointerLike {
  return { x, y, timeStampMs: tMs, pressure, kind };
}

describe("CaptureSession", () => {
  it("turns a tap into a one-point down/up pair", () => {
    const s = new CaptureSession();
    s.handle(ev("down", 10, 20, 1000));
    s.handle(ev("up", 10, 20, 1016, 0));
    expect(s.points.length).toBe(2);
    expect(s.points[0]).toMatchObject({ x: 10, y: 20, pen: 1 });
    expect(s.points[1].pen).toBe(0);
    expect(s.penStrokeCount()).toBe(1);
  });

  it("keeps a drag as one pen-down run", () => {
    const s = new CaptureSession();
    s.handle(ev("down", 0, 0, 0));
    for (let i = 1; i <= 5; i++) s.handle(ev("move", i, 0, i * 16));
    s.handle(ev("up", 6, 0, 96, 0));
    expect(s.points.filter((p) => p.pen === 1).length).toBe(6);
    expect(s.penStrokeCount()).toBe(1);
  });

  it("separates two drags into two pen-down runs", () => {
    const s = new CaptureSession();
    for (const base of [0, 500]) {
      s.handle(ev("down", base, 0, base));
      s.handle(ev("move", base + 1, 0, base + 16));
      s.handle(ev("up", base + 2, 0, base + 32, 0));
    }
    expect(s.penStrokeCount()).toBe(2);
  });

  it("ignores hover moves and maps low pressure to pen up", () => {
    const s = new CaptureSession({ pressureThreshold: 0.1 });
    expect(s.handle(ev("move", 5, 5, 0, 0))).toBeNull();
    s.handle(ev("down", 0, 0, 10, 0.5));
    const soft = s.handle(ev("move", 1, 0, 20, 0.05));
    expect(soft?.pen).toBe(0);
  });

  it("keeps timestamps monotone and relative in seconds", () => {
    const s = new CaptureSession();
    s.handle(ev("down", 0, 0, 5000));
    s.handle(ev("move", 1, 0, 5016));
    s.handle(ev("move", 2, 0, 5016)); // duplicate event timestamp
    const t = s.points.map((p) => p.t);
    expect(t[0]).toBe(0);
    expect(t[1]).toBeCloseTo(0.016, 6);
    expect(t[2]).toBeGreaterThan(t[1]);
  });

  it("applies the dpi scale to coordinates", () => {
    const s = new CaptureSession({ dpiScale: 2 });
    s.handle(ev("down", 3, 4, 0));
    expect(s.points[0]).toMatchObject({ x: 6, y: 8 });
  });

  it("builds a /recognize payload with exactly the captured points", () => {
    const s = new CaptureSession();
    s.handle(ev("down", 0, 0, 0));
    s.handle(ev("move", 1, 1, 16));
    s.handle(ev("up", 2, 2, 32, 0));
    const body = buildRecognizePayload(s.points);
    expect(body.points.length).toBe(s.points.length);
    expect(body.points[1]).toEqual({ x: 1, y: 1, t: s.points[1].t, pen: 1 });
  });
});
