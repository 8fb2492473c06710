// Wire types mirroring the recognition service schema.

export interface InkPoint {
  x: number;
  y: number;
  t: number; // seconds, relative to session start
  pen: 0 | 1;
}

export interface XY {
  x: number;
  y: number;
}

export interface StrokeRecord {
  m1: XY;
  m2: XY;
  m3: XY;
  h: XY;
  theta: number;
  degenerate: boolean;
  beta: { p: number; q: number; t0: number; t1: number; amp: number };
  arc: { a: number; b: number; x0: number; y0: number; theta: number };
  epc: [number, number, number, number];
}

export interface BpcSpan {
  name: string;
  span: [number, number];
}

export interface RecognizePayload {
  strokes: StrokeRecord[];
  bpc: BpcSpan[];
  equation: string;
  label: string;
  confidence: number;
  log_confidence: number;
}

export const EPC_NAMES = ["Valley", "RightObliqueShaft", "Shaft", "LeftObliqueShaft"] as const;

// polyline colors by dominant EPC, in EPC index order
export const EPC_COLORS = ["#2a7de1", "#27a35c", "#d45500", "#9044c0"] as const;

export function dominantEpc(mu: readonly number[]): number {
  let best = 0;
  for (let i = 1; i < mu.length; i++) if (mu[i] > mu[best]) best = i;
  return best;
}
