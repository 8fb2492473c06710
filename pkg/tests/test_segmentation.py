import math

import numpy as np
import pytest

from betaink.beta import synthesize_trace
from betaink.ink import InkPoint, InkTrace
from betaink.segmentation import SegmentOptions, curvilinear_velocity, segment
from betaink.fitting import fold_angle

from helpers import random_stroke_chain

HZ = 200.0


def test_single_stroke_round_trip_identity():
    rng = np.random.default_rng(0)
    chain = random_stroke_chain(rng, 1)
    trace = synthesize_trace(chain, HZ)
    strokes = segment(trace)
    assert len(strokes) == 1


@pytest.mark.parametrize("k", range(2, 9))
def test_k_stroke_round_trip_counts(k):
    rng = np.random.default_rng(100 + k)
    chain = random_stroke_chain(rng, k)
    trace = synthesize_trace(chain, HZ)
    strokes = segment(trace)
    assert len(strokes) == k


def test_round_trip_parameter_recovery():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        k = int(rng.integers(1, 9))
        chain = random_stroke_chain(rng, k)
        trace = synthesize_trace(chain, HZ)
        strokes = segment(trace)
        assert len(strokes) == k
        for true, got in zip(chain, strokes):
            for name in ("p", "q", "amplitude"):
                t_val = getattr(true.beta, name)
                g_val = getattr(got.beta, name)
                worst = max(worst, abs(g_val - t_val) / abs(t_val))
    assert worst <= 0.10


def test_straight_constant_speed_segment():
    t = np.linspace(0, 1, 201)
    trace = InkTrace.from_arrays(2 * t, np.zeros_like(t), t, np.ones_like(t, dtype=int))
    strokes = segment(trace)
    assert len(strokes) == 1
    arc = strokes[0].arc
    assert arc.b / arc.a < 0.05


def test_stroke_count_equals_interior_minima_plus_one():
    rng = np.random.default_rng(21)
    for k in (1, 3, 5):
        chain = random_stroke_chain(rng, k)
        trace = synthesize_trace(chain, HZ)
        strokes = segment(trace)
        assert len(strokes) == k  # k-1 interior minima + 1


def test_translation_invariance():
    rng = np.random.default_rng(3)
    chain = random_stroke_chain(rng, 4)
    base = synthesize_trace(chain, HZ)
    moved = base.replace_points(
        InkPoint(p.x + 11.5, p.y - 4.25, p.t, p.pen) for p in base.points
    )
    sa = segment(base)
    sb = segment(moved)
    assert len(sa) == len(sb)
    for a, b in zip(sa, sb):
        assert (a.points.m1.index, a.points.m3.index) == (b.points.m1.index, b.points.m3.index)
        assert a.chord_angle == pytest.approx(b.chord_angle, abs=1e-9)
        assert a.arc.theta == pytest.approx(b.arc.theta, abs=1e-6)


def test_rotation_equivariance():
    rng = np.random.default_rng(4)
    delta = 0.3
    chain = random_stroke_chain(rng, 4)
    base = synthesize_trace(chain, HZ)
    c, s = math.cos(delta), math.sin(delta)
    rotated = base.replace_points(
        InkPoint(p.x * c - p.y * s, p.x * s + p.y * c, p.t, p.pen) for p in base.points
    )
    sa = segment(base)
    sb = segment(rotated)
    assert len(sa) == len(sb)
    for a, b in zip(sa, sb):
        assert (a.points.m1.index, a.points.m3.index) == (b.points.m1.index, b.points.m3.index)
        assert fold_angle(a.chord_angle + delta) == pytest.approx(b.chord_angle, abs=1e-6)


def test_degenerate_stroke_warns_and_skips():
    t = np.linspace(0, 1, 50)
    trace = InkTrace.from_arrays(np.ones_like(t), np.ones_like(t), t, np.ones_like(t, dtype=int))
    with pytest.warns(UserWarning):
        strokes = segment(trace)
    assert strokes == []


def test_short_segments_merge_into_neighbors():
    rng = np.random.default_rng(9)
    chain = random_stroke_chain(rng, 3)
    trace = synthesize_trace(chain, HZ)
    # absurdly large min_points forces merging everything into one stroke
    strokes = segment(trace, SegmentOptions(min_points=10_000))
    assert len(strokes) == 1


def test_beta_points_ordering_and_projection():
    rng = np.random.default_rng(12)
    chain = random_stroke_chain(rng, 3)
    trace = synthesize_trace(chain, HZ)
    for es in segment(trace):
        bp = es.points
        assert bp.m1.t < bp.m2.t < bp.m3.t
        # h on the chord: collinear with m1 -> m3
        cross = (bp.m3.x - bp.m1.x) * (bp.h.y - bp.m1.y) - (bp.m3.y - bp.m1.y) * (bp.h.x - bp.m1.x)
        chord = math.hypot(bp.m3.x - bp.m1.x, bp.m3.y - bp.m1.y)
        assert abs(cross) / max(chord, 1e-12) < 1e-9
        # h is the foot of the perpendicular from m2
        dot = (bp.m3.x - bp.m1.x) * (bp.m2.x - bp.h.x) + (bp.m3.y - bp.m1.y) * (bp.m2.y - bp.h.y)
        assert abs(dot) / max(chord, 1e-12) < 1e-6
