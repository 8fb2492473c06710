// Pointer-event capture: turns down/move/up events into ink point
// messages.  Pure logic, no DOM types beyond a minimal event shape, so a
// scripted session can drive it in tests.

import type { InkPoint } from "./types.js";

export interface PointerLike {
  x: number; // canvas coordinates
  y: number;
  timeStampMs: number;
  pressure: number;
  kind: "down" | "move" | "up";
}

export interface CaptureOptions {
  // pressure at or below this maps to pen up; pointer events report
  // pressure 0 for hovering mice and ~0.5 while a button is held
  pressureThreshold?: number;
  dpiScale?: number;
}

export class CaptureSession {
  readonly points: InkPoint[] = [];
  private t0: number | null = null;
  private lastT = -Infinity;
  private down = false;
  private readonly threshold: number;
  private readonly scale: number;
  private readonly listeners: Array<(p: InkPoint) => void> = [];

  constructor(opts: CaptureOptions = {}) {
    this.threshold = opts.pressureThreshold ?? 0.05;
    this.scale = opts.dpiScale ?? 1;
  }

  onPoint(fn: (p: InkPoint) => void): void {
    this.listeners.push(fn);
  }

  get isDown(): boolean {
    return this.down;
  }

  handle(ev: PointerLike): InkPoint | null {
    if (ev.kind === "move" && !this.down) return null; // hover
    if (ev.kind === "down") this.down = true;
    const pen: 0 | 1 =
      ev.kind === "up" || ev.pressure <= this.threshold ? 0 : 1;
    if (ev.kind === "up") this.down = false;
    const point = this.emit(ev, pen);
    return point;
  }

  private emit(ev: PointerLike, pen: 0 | 1): InkPoint {
    if (this.t0 === null) this.t0 = ev.timeStampMs;
    let t = (ev.timeStampMs - this.t0) / 1000;
    if (t <= this.lastT) t = this.lastT + 1e-4; // keep timestamps monotone
    this.lastT = t;
    const point: InkPoint = {
      x: ev.x * this.scale,
      y: ev.y * this.scale,
      t,
      pen,
    };
    this.points.push(point);
    for (const fn of this.listeners) fn(point);
    return point;
  }

  penStrokeCount(): number {
    let count = 0;
    let prev: 0 | 1 = 0;
    for (const p of this.points) {
      if (p.pen === 1 && prev === 0) count++;
      prev = p.pen;
    }
    return count;
  }

  clear(): void {
    this.points.length = 0;
    this.t0 = null;
    this.lastT = -Infinity;
    this.down = false;
  }
}

// request body for POST /recognize
export function buildRecognizePayload(points: readonly InkPoint[]) {
  return { points: points.map((p) => ({ x: p.x, y: p.y, t: p.t, pen: p.pen })) };
}
