"""Recognition service backing the live ink console.

Endpoints:

    GET  /health     -> {"version": ...}
    POST /recognize  body: one JSON ink trace {label?, meta?, points: [...]}
                     -> prediction plus full pipeline introspection
    WS   /stream     client sends {x, y, t, pen} point frames and a final
                     {"end": true}; the server replies with incremental
                     stroke records and then a payload identical to
                     /recognize

The response schema per stroke: beta points m1/m2/m3/h, theta (chord
deviation angle), the Beta profile, the elliptic arc and the fuzzy EPC
memberships; plus the BPC decomposition and the rendered handwriting
equation.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect

from . import __version__
from .experiment import _standardize_apply, trace_features
from .ink import InkPoint, InkTrace
from .perceptual import compose_bpc, encode_sequence, handwriting_equation
from .preprocess import PreprocessConfig, preprocess
from .segmentation import ElliptiStroke, pen_stroke_groups, segment
from .seqnet.model_io import ModelBundle, load_model

__all__ = ["create_app", "recognize_trace"]


def _point(p) -> dict:
    return {"x": p.x, "y": p.y}


def _stroke_record(s: ElliptiStroke, mu) -> dict:
    return {
        "m1": _point(s.points.m1),
        "m2": _point(s.points.m2),
        "m3": _point(s.points.m3),
        "h": _point(s.points.h),
        "theta": s.chord_angle,
        "degenerate": s.degenerate,
        "beta": {
            "p": s.beta.p,
            "q": s.beta.q,
            "t0": s.beta.t0,
            "t1": s.beta.t1,
            "amp": s.beta.amplitude,
        },
        "arc": {
            "a": s.arc.a,
            "b": s.arc.b,
            "x0": s.arc.x0,
            "y0": s.arc.y0,
            "theta": s.arc.theta,
        },
        "epc": list(mu),
    }


def _trace_from_payload(doc) -> InkTrace:
    pts = doc.get("points") if isinstance(doc, dict) else None
    if not pts:
        raise ValueError("ink payload needs a non-empty 'points' array")
    points = []
    for i, p in enumerate(pts):
        try:
            points.append(InkPoint(float(p["x"]), float(p["y"]), float(p["t"]), int(p["pen"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad point {i}: {exc}") from exc
    meta = {str(k): str(v) for k, v in (doc.get("meta") or {}).items()}
    return InkTrace(tuple(points), label=doc.get("label"), meta=meta).canonical()


def analyze_trace(trace: InkTrace, pp: PreprocessConfig | None = None) -> tuple[list[ElliptiStroke], dict]:
    """Segment + encode a trace; returns (strokes, partial payload)."""
    pp = pp or PreprocessConfig()
    clean = preprocess(trace, pp)
    strokes = segment(clean)
    if not strokes:
        return [], {"strokes": [], "bpc": [], "equation": "handwriting={}"}
    seq = encode_sequence(strokes)
    records = [_stroke_record(s, item.membership.mu) for s, item in zip(strokes, seq.items)]
    epcs = seq.dominant_epcs()
    spans = []
    offset = 0
    for size in pen_stroke_groups(clean, strokes):
        for sp in compose_bpc(epcs[offset:offset + size]):
            spans.append({"name": sp.bpc.value, "span": [sp.start + offset, sp.stop + offset]})
        offset += size
    equation = handwriting_equation(seq, _spans_for_equation(spans))
    return strokes, {"strokes": records, "bpc": spans, "equation": equation}


def _spans_for_equation(spans):
    from .perceptual import Bpc, BpcSpan

    return [BpcSpan(Bpc(sp["name"]), sp["span"][0], sp["span"][1]) for sp in spans]


def recognize_trace(bundle: ModelBundle, trace: InkTrace, pp: PreprocessConfig | None = None) -> dict:
    """Full pipeline introspection plus the model's prediction."""
    strokes, payload = analyze_trace(trace, pp)
    feats = trace_features(trace, bundle.pipeline, pp)
    feats = _standardize_apply(feats, bundle.feature_mean, bundle.feature_std)
    got, log_conf = bundle.net.predict(feats)
    if bundle.net.config.use_ctc:
        label = "".join(bundle.classes[i] for i in got if 0 <= i < len(bundle.classes))
    else:
        label = bundle.classes[got]
    payload["label"] = label
    payload["confidence"] = float(np.exp(log_conf))
    payload["log_confidence"] = float(log_conf)
    return payload


def create_app(model_path=None, bundle: ModelBundle | None = None, pp: PreprocessConfig | None = None) -> FastAPI:
    if bundle is None:
        if model_path is None:
            raise ValueError("need a model path or bundle")
        bundle = load_model(model_path)
    pp = pp or PreprocessConfig()
    app = FastAPI(title="betaink recognition service")

    @app.get("/health")
    def health():
        return {"version": __version__}

    @app.post("/recognize")
    def recognize(doc: dict):
        try:
            trace = _trace_from_payload(doc)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            return recognize_trace(bundle, trace, pp)
        except Exception as exc:  # model/pipeline failure: surface a diagnostic
            raise HTTPException(status_code=500, detail=f"recognition failed: {exc}")

    @app.websocket("/stream")
    async def stream(ws: WebSocket):
        await ws.accept()
        points: list[dict] = []
        sent_strokes = 0
        try:
            while True:
                msg = await ws.receive_json()
                if msg.get("end"):
                    break
                points.append(msg)
                # incremental analysis on each pen lift
                if msg.get("pen") == 0 and len(points) > 3:
                    try:
                        trace = _trace_from_payload({"points": points})
                        _, partial = analyze_trace(trace, pp)
                        for record in partial["strokes"][sent_strokes:]:
                            await ws.send_json({"stroke": record})
                        sent_strokes = len(partial["strokes"])
                    except ValueError:
                        pass
            try:
                trace = _trace_from_payload({"points": points})
            except ValueError as exc:
                await ws.send_json({"error": str(exc)})
                await ws.close()
                return
            payload = recognize_trace(bundle, trace, pp)
            await ws.send_json({"final": payload})
            await ws.close()
        except WebSocketDisconnect:
            return

    return app
