// Console wiring: canvas capture on top, live overlay + panels below.
// Capture and recognition stay decoupled: drawing never waits on the
// network; stream frames update the overlay as they arrive.

import { CaptureSession, type PointerLike } from "./capture.js";
import { RecognitionClient, StreamSession } from "./client.js";
import { renderBanner, renderErrorBanner, renderMembershipBars, renderOverlay } from "./overlay.js";
import type { RecognizePayload } from "./types.js";

const BASE_URL = (window as any).BETAINK_URL ?? "http://127.0.0.1:8077";

function pointerLike(ev: PointerEvent, kind: PointerLike["kind"], canvas: HTMLCanvasElement): PointerLike {
  const rect = canvas.getBoundingClientRect();
  return {
    x: ev.clientX - rect.left,
    y: ev.clientY - rect.top,
    timeStampMs: ev.timeStamp,
    pressure: ev.pressure > 0 ? ev.pressure : kind === "up" ? 0 : 0.5,
    kind,
  };
}

export function mount(root: Document = document): void {
  const ink = root.getElementById("ink") as HTMLCanvasElement;
  const overlay = root.getElementById("overlay") as HTMLCanvasElement;
  const clearBtn = root.getElementById("clear") as HTMLButtonElement;
  const doneBtn = root.getElementById("done") as HTMLButtonElement;
  const inkCtx = ink.getContext("2d")!;
  const overlayCtx = overlay.getContext("2d")!;

  const session = new CaptureSession({ dpiScale: 1 });
  const client = new RecognitionClient(BASE_URL);
  let stream: StreamSession | null = null;
  let lastPayload: RecognizePayload | null = null;

  const repaintOverlay = () => {
    if (!lastPayload) return;
    renderOverlay(overlayCtx, lastPayload, session.points, overlay.width, overlay.height);
    renderMembershipBars(overlayCtx, lastPayload, 10, 16, 80);
    renderBanner(overlayCtx, lastPayload, 10, overlay.height - 48);
  };

  const openStream = () =>
    new StreamSession(BASE_URL, {
      onStroke: () => undefined, // incremental records could preview here
      onFinal: (payload) => {
        lastPayload = payload;
        repaintOverlay();
      },
      onError: (message) => renderErrorBanner(overlayCtx, message, 10, 20),
    });

  session.onPoint((p) => {
    stream?.sendPoint(p);
    if (p.pen === 1) {
      inkCtx.fillStyle = "#000";
      inkCtx.beginPath();
      inkCtx.arc(p.x, p.y, 1.4, 0, 2 * Math.PI);
      inkCtx.fill();
    }
  });

  let drawing = false;
  ink.addEventListener("pointerdown", (ev) => {
    if (!stream) stream = openStream();
    drawing = true;
    ink.setPointerCapture(ev.pointerId);
    session.handle(pointerLike(ev, "down", ink));
  });
  ink.addEventListener("pointermove", (ev) => {
    if (drawing) session.handle(pointerLike(ev, "move", ink));
  });
  ink.addEventListener("pointerup", (ev) => {
    drawing = false;
    session.handle(pointerLike(ev, "up", ink));
  });

  doneBtn.addEventListener("click", async () => {
    stream?.finalize(); // stream result repaints when it lands
    try {
      lastPayload = await client.recognize(session.points);
      repaintOverlay();
    } catch (err) {
      renderErrorBanner(overlayCtx, String(err), 10, 20);
    }
  });

  clearBtn.addEventListener("click", () => {
    session.clear();
    lastPayload = null;
    stream?.close();
    stream = null;
    inkCtx.clearRect(0, 0, ink.width, ink.height);
    overlayCtx.clearRect(0, 0, overlay.width, overlay.height);
  });
}

if (typeof document !== "undefined" && document.getElementById("ink")) {
  mount();
}
