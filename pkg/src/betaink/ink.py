"""Core ink data model and the canonical ink file formats.

A trace is a time-ordered sequence of pen samples ``(x, y, t, pen)`` where
``pen`` is 1 while the tip touches the surface and 0 while it is lifted.
Two interchangeable on-disk encodings are supported:

* text: ``#`` comments, ``@label``/``@meta`` header lines, one ``x y t pen``
  record per line, blank line between traces;
* json: a top-level array of ``{"label", "meta", "points"}`` objects.

Both round-trip exactly for canonical traces.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "InkPoint",
    "InkTrace",
    "PenStroke",
    "InkFormatError",
    "parse_ink",
    "serialize_ink",
    "split_pen_strokes",
]


class InkFormatError(ValueError):
    """Malformed ink input; ``line`` is the 1-based offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class InkPoint:
    """One pen sample; ``pen`` is 1 for pen-down, 0 for pen-up."""

    x: float
    y: float
    t: float
    pen: int

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.t)):
            raise ValueError(f"non-finite ink point ({self.x}, {self.y}, {self.t})")
        if self.pen not in (0, 1):
            raise ValueError(f"pen must be 0 or 1, got {self.pen!r}")


@dataclass(frozen=True)
class InkTrace:
    """An ordered pen trajectory with an optional class label and metadata.

    Instances are immutable; processing functions return new traces.
    """

    points: tuple[InkPoint, ...]
    label: str | None = None
    meta: Mapping[str, str] = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def arrays(self):
        """Return (x, y, t, pen) as float64/int arrays."""
        n = len(self.points)
        x = np.empty(n)
        y = np.empty(n)
        t = np.empty(n)
        pen = np.empty(n, dtype=np.int64)
        for i, p in enumerate(self.points):
            x[i] = p.x
            y[i] = p.y
            t[i] = p.t
            pen[i] = p.pen
        return x, y, t, pen

    @classmethod
    def from_arrays(cls, x, y, t, pen, label=None, meta=None):
        pts = tuple(
            InkPoint(float(xi), float(yi), float(ti), int(pi))
            for xi, yi, ti, pi in zip(x, y, t, pen)
        )
        return cls(pts, label=label, meta=dict(meta or {}))

    def replace_points(self, points: Iterable[InkPoint]) -> "InkTrace":
        return InkTrace(tuple(points), label=self.label, meta=dict(self.meta))

    def with_meta(self, **entries: str) -> "InkTrace":
        merged = dict(self.meta)
        merged.update(entries)
        return InkTrace(self.points, label=self.label, meta=merged)

    def bbox(self):
        """(xmin, xmax, ymin, ymax) over all points."""
        xs = [p.x for p in self.points]
        ys = [p.y for p in self.points]
        return min(xs), max(xs), min(ys), max(ys)

    def canonical(self) -> "InkTrace":
        """Sort by time and merge duplicate-timestamp points.

        Duplicates are merged by averaging x, y and OR-ing pen so the
        canonical form is deterministic.
        """
        if not self.points:
            raise ValueError("trace has no points")
        pts = sorted(self.points, key=lambda p: p.t)
        merged: list[InkPoint] = []
        group = [pts[0]]
        for p in pts[1:]:
            if p.t == group[0].t:
                group.append(p)
            else:
                merged.append(_merge_group(group))
                group = [p]
        merged.append(_merge_group(group))
        return self.replace_points(merged)


def _merge_group(group: list[InkPoint]) -> InkPoint:
    if len(group) == 1:
        return group[0]
    x = sum(p.x for p in group) / len(group)
    y = sum(p.y for p in group) / len(group)
    pen = 1 if any(p.pen for p in group) else 0
    return InkPoint(x, y, group[0].t, pen)


@dataclass(frozen=True)
class PenStroke:
    """A maximal run of pen-down points; ``start:stop`` indexes the parent trace."""

    start: int
    stop: int
    points: tuple[InkPoint, ...]

    def __len__(self):
        return self.stop - self.start


def split_pen_strokes(trace: InkTrace) -> list[PenStroke]:
    """Split a canonical trace into its maximal pen-down runs, in order."""
    strokes = []
    start = None
    for i, p in enumerate(trace.points):
        if p.pen == 1 and start is None:
            start = i
        elif p.pen == 0 and start is not None:
            strokes.append(PenStroke(start, i, trace.points[start:i]))
            start = None
    if start is not None:
        strokes.append(PenStroke(start, len(trace.points), trace.points[start:]))
    return strokes


# ---------------------------------------------------------------------------
# text format


def _serialize_text(traces) -> bytes:
    lines = []
    for trace in traces:
        if trace.label is not None:
            lines.append(f"@label {trace.label}")
        for key in trace.meta:
            lines.append(f"@meta {key} {trace.meta[key]}")
        for p in trace.points:
            lines.append(f"{p.x!r} {p.y!r} {p.t!r} {p.pen}")
        lines.append("")
    return "\n".join(lines).encode("utf-8")


def _parse_text(data: bytes) -> list[InkTrace]:
    traces = []
    label = None
    meta: dict[str, str] = {}
    points: list[InkPoint] = []

    def flush(lineno):
        nonlocal label, meta, points
        if not points and label is None and not meta:
            return
        if not points:
            raise InkFormatError("trace has no points", lineno)
        traces.append(InkTrace(tuple(points), label=label, meta=meta).canonical())
        label, meta, points = None, {}, []

    lineno = 0
    for lineno, raw in enumerate(data.decode("utf-8").split("\n"), start=1):
        line = raw.strip()
        if not line:
            flush(lineno)
            continue
        if line.startswith("#"):
            continue
        if line.startswith("@label"):
            label = line[len("@label"):].strip()
            continue
        if line.startswith("@meta"):
            parts = line.split(None, 2)
            if len(parts) < 3:
                raise InkFormatError("@meta needs a key and a value", lineno)
            meta[parts[1]] = parts[2]
            continue
        fields = line.split()
        if len(fields) != 4:
            raise InkFormatError(f"expected 'x y t pen', got {line!r}", lineno)
        try:
            x, y, t = float(fields[0]), float(fields[1]), float(fields[2])
            pen = int(fields[3])
        except ValueError as exc:
            raise InkFormatError(str(exc), lineno) from exc
        try:
            points.append(InkPoint(x, y, t, pen))
        except ValueError as exc:
            raise InkFormatError(str(exc), lineno) from exc
    flush(lineno + 1)
    return traces


# ---------------------------------------------------------------------------
# json format


def _serialize_json(traces) -> bytes:
    payload = [
        {
            "label": trace.label,
            "meta": dict(trace.meta),
            "points": [{"x": p.x, "y": p.y, "t": p.t, "pen": p.pen} for p in trace.points],
        }
        for trace in traces
    ]
    return json.dumps(payload, indent=None, separators=(",", ":")).encode("utf-8")


def _parse_json(data: bytes) -> list[InkTrace]:
    try:
        payload = json.loads(data.decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise InkFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(payload, list):
        raise InkFormatError("top level must be an array of traces")
    traces = []
    for i, rec in enumerate(payload):
        pts = rec.get("points", [])
        if not pts:
            raise InkFormatError(f"trace {i} has no points")
        try:
            points = tuple(InkPoint(float(p["x"]), float(p["y"]), float(p["t"]), int(p["pen"])) for p in pts)
        except (KeyError, TypeError, ValueError) as exc:
            raise InkFormatError(f"trace {i}: {exc}") from exc
        label = rec.get("label")
        meta = {str(k): str(v) for k, v in rec.get("meta", {}).items()}
        traces.append(InkTrace(points, label=label, meta=meta).canonical())
    return traces


def parse_ink(data: bytes, format: str = "text") -> list[InkTrace]:
    """Parse the canonical ink formats into canonicalized traces."""
    if format == "text":
        return _parse_text(data)
    if format == "json":
        return _parse_json(data)
    raise ValueError(f"unknown ink format {format!r}")


def serialize_ink(traces: Iterable[InkTrace], format: str = "text") -> bytes:
    """Serialize traces; the output re-parses to equal traces."""
    traces = list(traces)
    if format == "text":
        return _serialize_text(traces)
    if format == "json":
        return _serialize_json(traces)
    raise ValueError(f"unknown ink format {format!r}")
