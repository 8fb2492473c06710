"""Shared fixture builders: random Beta-elliptic stroke chains."""

import math

import numpy as np

from betaink.beta import BetaProfile, SynthStroke, amplitude_for_arc_length
from betaink.fitting import EllipticArc, fold_angle


def arc_length_over_sweep(arc: EllipticArc, direction: float, sweep: float, n=2048) -> float:
    sign = 1.0 if direction >= 0 else -1.0
    phi = arc.arc_start + sign * np.linspace(0.0, sweep, n)
    r = np.hypot(arc.a * np.sin(phi), arc.b * np.cos(phi))
    return float(np.trapezoid(r, dx=sweep / (n - 1)))


def line_stroke(t0, t1, angle, length=1.0, p=2.0, q=2.0):
    """A straight stroke: a nearly flat ellipse traced along its major axis."""
    arc = EllipticArc(0.0, 0.0, length / 2, 1e-6, fold_angle(angle), arc_start=math.pi)
    prof = BetaProfile(t0, t1, p, q, 1.0)
    amp = amplitude_for_arc_length(prof, length)
    return SynthStroke(BetaProfile(t0, t1, p, q, amp), arc)


def random_stroke_chain(rng, k, t_start=0.0, grid_hz=200.0):
    """k abutting strokes with curved arcs and well-separated bells.

    Durations snap to the sampling grid so stroke junctions (exact
    velocity zeros) land on samples.
    """
    strokes = []
    t = t_start
    for _ in range(k):
        dur = round(rng.uniform(0.35, 0.6) * grid_hz) / grid_hz
        p = rng.uniform(1.6, 3.2)
        q = rng.uniform(1.6, 3.2)
        a = rng.uniform(0.4, 1.0)
        b = a * rng.uniform(0.55, 0.9)
        theta = fold_angle(rng.uniform(-1.4, 1.4))
        arc = EllipticArc(0.0, 0.0, a, b, theta, arc_start=rng.uniform(0, 2 * math.pi))
        direction = 1 if rng.random() < 0.5 else -1
        sweep = rng.uniform(1.0, 1.8)
        length = arc_length_over_sweep(arc, direction, sweep)
        prof = BetaProfile(t, t + dur, p, q, 1.0)
        amp = amplitude_for_arc_length(prof, length)
        strokes.append(SynthStroke(BetaProfile(t, t + dur, p, q, amp), arc, direction))
        t += dur
    return strokes
