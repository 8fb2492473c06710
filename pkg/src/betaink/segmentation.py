"""Velocity-based segmentation of ink into Beta-elliptic strokes.

Stroke boundaries sit at local minima of the (smoothed) curvilinear
velocity; each inter-boundary segment carries the beta points

    M1, M3  boundary samples (velocity minima / curvature maxima),
    M2      the interior velocity maximum,
    H       the orthogonal projection of M2 onto the M1-M3 chord,

plus a fitted Beta velocity profile and a fitted elliptic arc, for ten
parameters per stroke: p, q, t0, t1, amplitude, a, b, x0, y0, theta.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .beta import BetaProfile
from .fitting import EllipticArc, deviation_angle, fit_arc, fit_beta
from .ink import InkTrace, split_pen_strokes

__all__ = [
    "BetaPoint",
    "BetaPoints",
    "ElliptiStroke",
    "SegmentOptions",
    "DegenerateStrokeWarning",
    "curvilinear_velocity",
    "pen_stroke_groups",
    "segment",
]


class DegenerateStrokeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class BetaPoint:
    index: int
    x: float
    y: float
    t: float


@dataclass(frozen=True)
class BetaPoints:
    """Anchor points of one stroke; h projects m2 onto the m1-m3 chord."""

    m1: BetaPoint
    m2: BetaPoint
    m3: BetaPoint
    h: BetaPoint


@dataclass(frozen=True)
class ElliptiStroke:
    """One segmented stroke: Beta profile + elliptic arc + beta points."""

    beta: BetaProfile
    arc: EllipticArc
    points: BetaPoints
    chord_angle: float
    degenerate: bool = False

    def parameters(self) -> dict:
        """The ten Beta-elliptic parameters as a flat mapping."""
        return {
            "p": self.beta.p,
            "q": self.beta.q,
            "t0": self.beta.t0,
            "t1": self.beta.t1,
            "amplitude": self.beta.amplitude,
            "a": self.arc.a,
            "b": self.arc.b,
            "x0": self.arc.x0,
            "y0": self.arc.y0,
            "theta": self.arc.theta,
        }


@dataclass(frozen=True)
class SegmentOptions:
    min_points: int = 5
    smooth_window: int | None = None  # default: sample_rate / 20
    prominence_frac: float = 0.05


def pen_stroke_groups(trace: InkTrace, strokes: list["ElliptiStroke"]) -> list[int]:
    """Sizes of consecutive stroke groups that share one pen-down run."""
    sizes = []
    for run in split_pen_strokes(trace):
        n = sum(1 for s in strokes if run.start <= s.points.m1.index < run.stop)
        if n:
            sizes.append(n)
    return sizes


def curvilinear_velocity(trace: InkTrace):
    """(t, v) with v the speed |d(x,y)/dt| from central differences.

    Endpoints use one-sided differences.  Expects a uniformly resampled
    single-stroke trace with at least 3 points.
    """
    if len(trace) < 3:
        raise ValueError(f"need >= 3 points for velocity, got {len(trace)}")
    x, y, t, _ = trace.arrays()
    dx = np.empty_like(x)
    dy = np.empty_like(y)
    dt = np.empty_like(t)
    dx[1:-1] = x[2:] - x[:-2]
    dy[1:-1] = y[2:] - y[:-2]
    dt[1:-1] = t[2:] - t[:-2]
    dx[0], dy[0], dt[0] = x[1] - x[0], y[1] - y[0], t[1] - t[0]
    dx[-1], dy[-1], dt[-1] = x[-1] - x[-2], y[-1] - y[-2], t[-1] - t[-2]
    return t, np.hypot(dx, dy) / dt


def _smooth(v, window):
    if window < 3:
        return v.copy()
    if window % 2 == 0:
        window += 1
    pad = window // 2
    padded = np.concatenate([np.full(pad, v[0]), v, np.full(pad, v[-1])])
    kernel = np.ones(window) / window
    return np.convolve(padded, kernel, mode="valid")


def _projection(m1: BetaPoint, m2: BetaPoint, m3: BetaPoint) -> BetaPoint:
    cx, cy = m3.x - m1.x, m3.y - m1.y
    cc = cx * cx + cy * cy
    if cc == 0:
        return BetaPoint(m2.index, m1.x, m1.y, m2.t)
    s = ((m2.x - m1.x) * cx + (m2.y - m1.y) * cy) / cc
    s = min(max(s, 0.0), 1.0)
    return BetaPoint(m2.index, m1.x + s * cx, m1.y + s * cy, m2.t)


def _boundaries(v, v_smooth, window, opts: SegmentOptions):
    """Velocity minima: detected on the smoothed profile, refined on the raw one."""
    prominence = opts.prominence_frac * float(v_smooth.max())
    minima, _ = find_peaks(-v_smooth, prominence=max(prominence, 1e-12))
    refined = []
    for m in minima:
        lo = max(int(m) - window, 1)
        hi = min(int(m) + window + 1, len(v) - 1)
        refined.append(lo + int(np.argmin(v[lo:hi])))
    return [0, *sorted(set(refined)), len(v) - 1]


def segment(trace: InkTrace, opts: SegmentOptions | None = None) -> list[ElliptiStroke]:
    """Segment a preprocessed trace into Beta-elliptic strokes.

    Works per pen-down stroke; adjacent segments share their boundary
    sample.  Segments shorter than ``opts.min_points`` merge into a
    neighbor; fully degenerate runs (all points coincident) are skipped
    with a DegenerateStrokeWarning.
    """
    opts = opts or SegmentOptions()
    out: list[ElliptiStroke] = []
    for stroke in split_pen_strokes(trace):
        if len(stroke) < 3:
            continue
        sub = InkTrace(stroke.points)
        x, y, t, _ = sub.arrays()
        if np.ptp(x) == 0 and np.ptp(y) == 0:
            warnings.warn("skipping degenerate stroke (all points coincide)", DegenerateStrokeWarning)
            continue
        _, v = curvilinear_velocity(sub)
        dt = np.median(np.diff(t))
        window = opts.smooth_window
        if window is None:
            window = max(3, round(1.0 / (20 * dt)))
        v_smooth = _smooth(v, window)
        bounds = _boundaries(v, v_smooth, window, opts)
        # merge too-short segments into their shorter neighbor side
        merged = [bounds[0]]
        for b in bounds[1:-1]:
            if b - merged[-1] >= opts.min_points - 1 and len(v) - 1 - b >= opts.min_points - 1:
                merged.append(b)
        merged.append(bounds[-1])
        bounds = merged

        for lo, hi in zip(bounds[:-1], bounds[1:]):
            if hi - lo + 1 < max(3, opts.min_points):
                if not (lo == bounds[0] and hi == bounds[-1]):
                    continue
            es = _fit_segment(stroke.start, x, y, t, v, lo, hi)
            if es is not None:
                out.append(es)
    return out


def _fit_segment(base_index, x, y, t, v, lo, hi):
    seg = slice(lo, hi + 1)
    xs, ys, ts, vs = x[seg], y[seg], t[seg], v[seg]
    m1 = BetaPoint(base_index + lo, float(x[lo]), float(y[lo]), float(t[lo]))
    m3 = BetaPoint(base_index + hi, float(x[hi]), float(y[hi]), float(t[hi]))
    if m1.x == m3.x and m1.y == m3.y and np.ptp(xs) == 0 and np.ptp(ys) == 0:
        warnings.warn("skipping degenerate segment (all points coincide)", DegenerateStrokeWarning)
        return None
    interior = np.argmax(vs[1:-1]) + 1 if len(vs) > 2 else len(vs) // 2
    m2 = BetaPoint(base_index + lo + int(interior), float(xs[interior]), float(ys[interior]), float(ts[interior]))
    h = _projection(m1, m2, m3)
    bp = BetaPoints(m1, m2, m3, h)

    try:
        profile = fit_beta(ts, vs, float(ts[0]), float(ts[-1]))
    except ValueError:
        warnings.warn("beta fit failed; using nominal profile", DegenerateStrokeWarning)
        vmax = max(float(vs.max()), 1e-9)
        profile = BetaProfile(float(ts[0]), float(ts[-1]), 2.0, 2.0, vmax)

    arc = fit_arc(np.column_stack([xs, ys]), bp)
    # a stroke is degenerate only when it carries no usable chord
    # direction (closed sub-path: m1 and m3 coincide); a chord-only arc
    # fallback still has a perfectly good deviation angle
    if m1.x == m3.x and m1.y == m3.y:
        return ElliptiStroke(profile, arc, bp, arc.theta, degenerate=True)
    chord = deviation_angle(m1.x, m1.y, m3.x, m3.y)
    return ElliptiStroke(profile, arc, bp, chord, degenerate=False)
