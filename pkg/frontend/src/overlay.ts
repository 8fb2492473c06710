// Overlay rendering: stroke polylines colored by dominant EPC, beta-point
// markers, membership bars, BPC list and the prediction banner.
//
// Drawing goes through the minimal Draw2D surface so tests can count the
// primitives without a real canvas.  Stroke records from the service live
// in the normalized frame (bbox centered, height 1); the inverse of that
// transform maps them back onto the captured ink.

import { dominantEpc, EPC_COLORS, type InkPoint, type RecognizePayload, type XY } from "./types.js";

export interface Draw2D {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  setLineDash(segments: number[]): void;
}

interface Frame {
  cx: number;
  cy: number;
  scale: number; // canvas units per normalized unit
}

export function normalizedFrame(points: readonly InkPoint[]): Frame {
  if (points.length === 0) return { cx: 0, cy: 0, scale: 1 };
  let xmin = Infinity, xmax = -Infinity, ymin = Infinity, ymax = -Infinity;
  for (const p of points) {
    xmin = Math.min(xmin, p.x);
    xmax = Math.max(xmax, p.x);
    ymin = Math.min(ymin, p.y);
    ymax = Math.max(ymax, p.y);
  }
  const extent = ymax - ymin > 0 ? ymax - ymin : xmax - xmin;
  return { cx: (xmin + xmax) / 2, cy: (ymin + ymax) / 2, scale: extent > 0 ? extent : 1 };
}

function toCanvas(p: XY, frame: Frame): XY {
  return { x: p.x * frame.scale + frame.cx, y: p.y * frame.scale + frame.cy };
}

export interface OverlayStats {
  polylines: number;
  markers: number;
}

// one polyline per stroke record, colored by its dominant EPC; degenerate
// strokes render dashed
export function renderOverlay(
  ctx: Draw2D,
  payload: RecognizePayload,
  captured: readonly InkPoint[],
  width: number,
  height: number,
): OverlayStats {
  ctx.clearRect(0, 0, width, height);
  const frame = normalizedFrame(captured);
  let polylines = 0;
  let markers = 0;

  for (const stroke of payload.strokes) {
    const inside = captured.filter(
      (p) => p.pen === 1 && p.t >= stroke.beta.t0 - 1e-9 && p.t <= stroke.beta.t1 + 1e-9,
    );
    ctx.strokeStyle = EPC_COLORS[dominantEpc(stroke.epc)];
    ctx.lineWidth = 2.5;
    ctx.setLineDash(stroke.degenerate ? [4, 4] : []);
    ctx.beginPath();
    const path = inside.length >= 2 ? inside : [stroke.m1, stroke.m3].map((q) => toCanvas(q, frame));
    ctx.moveTo(path[0].x, path[0].y);
    for (const p of path.slice(1)) ctx.lineTo(p.x, p.y);
    ctx.stroke();
    polylines++;

    ctx.setLineDash([]);
    for (const [name, color] of [
      ["m1", "#222"],
      ["m2", "#d01616"],
      ["m3", "#222"],
      ["h", "#11861b"],
    ] as const) {
      const q = toCanvas(stroke[name], frame);
      ctx.fillStyle = color;
      ctx.beginPath();
      ctx.arc(q.x, q.y, name === "m2" ? 4 : 3, 0, 2 * Math.PI);
      ctx.fill();
      markers++;
    }
  }
  return { polylines, markers };
}

// horizontal membership bars, one row of four per stroke
export function renderMembershipBars(
  ctx: Draw2D,
  payload: RecognizePayload,
  x0: number,
  y0: number,
  barWidth: number,
): void {
  const rowH = 14;
  payload.strokes.forEach((stroke, row) => {
    stroke.epc.forEach((mu, i) => {
      const y = y0 + row * rowH + i * 3;
      ctx.fillStyle = EPC_COLORS[i];
      ctx.fillRect(x0, y, Math.max(1, mu * barWidth), 2);
    });
  });
}

export function renderBanner(
  ctx: Draw2D,
  payload: RecognizePayload,
  x: number,
  y: number,
): void {
  ctx.fillStyle = "#111";
  ctx.font = "bold 20px system-ui";
  ctx.fillText(`${payload.label}  (${(payload.confidence * 100).toFixed(1)}%)`, x, y);
  ctx.font = "12px ui-monospace, monospace";
  ctx.fillText(payload.equation, x, y + 20);
  const bpc = payload.bpc.map((b) => `${b.name}[${b.span[0]}:${b.span[1]}]`).join("  ");
  ctx.fillText(bpc, x, y + 36);
}

export function renderErrorBanner(ctx: Draw2D, message: string, x: number, y: number): void {
  ctx.fillStyle = "#b00020";
  ctx.font = "bold 14px system-ui";
  ctx.fillText(`service error: ${message}`, x, y);
}
