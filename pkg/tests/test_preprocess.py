import math

import numpy as np
import pytest
from scipy.signal import cheby1, freqz

from betaink.ink import InkPoint, InkTrace
from betaink.preprocess import (
    PreprocessConfig,
    dehook,
    interpolate,
    lowpass,
    normalize,
    preprocess,
)

CFG = PreprocessConfig()


def trace_from(x, y, t, pen=None):
    pen = pen if pen is not None else np.ones(len(x), dtype=int)
    return InkTrace.from_arrays(x, y, t, pen)


def test_two_point_line_resamples_to_101_points():
    trace = trace_from([0.0, 10.0], [0.0, 5.0], [0.0, 1.0])
    out = interpolate(trace, CFG)
    assert len(out) == 101
    x, y, t, pen = out.arrays()
    assert np.allclose(np.diff(t), 0.01)
    assert np.allclose(y, 0.5 * x)  # collinear
    assert pen.all()


def test_already_uniform_trace_is_fixed_point():
    t = np.linspace(0, 1, 101)
    x = np.cos(2 * np.pi * t)
    y = np.sin(2 * np.pi * t)
    trace = trace_from(x, y, t)
    out = interpolate(trace, CFG)
    assert len(out) == len(trace)
    xo, yo, to, _ = out.arrays()
    assert np.max(np.abs(xo - x)) < 1e-9
    assert np.max(np.abs(yo - y)) < 1e-9
    assert np.max(np.abs(to - t)) < 1e-9


def test_irregular_sine_resampled_close_to_analytic():
    rng = np.random.default_rng(0)
    t = np.sort(rng.uniform(0, 1, 120))
    t[0], t[-1] = 0.0, 1.0
    trace = trace_from(t.copy(), np.sin(2 * np.pi * t), t)
    out = interpolate(trace, CFG)
    _, y, to, _ = out.arrays()
    assert np.max(np.abs(y - np.sin(2 * np.pi * to))) < 1e-3


def test_short_stroke_passes_through():
    trace = trace_from([1.0], [2.0], [0.5])
    assert interpolate(trace, CFG) == trace


def line_with_hooks(head=False, tail=False):
    # 1 s body along +x at 100 Hz, optional 3-point hooks turning ~120 degrees
    t = np.linspace(0, 1, 101)
    x = list(t * 1.0)
    y = [0.0] * 101
    ts = list(t)
    step = 0.01

    def hook_offsets(sign):
        # ~120 degrees away from the +x body direction
        dx, dy = math.cos(math.radians(120)), math.sin(math.radians(120))
        return [(i * step * dx * sign, i * step * dy * sign) for i in (1, 2, 3)]

    if tail:
        bx, by, bt = x[-1], y[-1], ts[-1]
        for i, (ox, oy) in enumerate(hook_offsets(1.0), start=1):
            x.append(bx + ox)
            y.append(by + oy)
            ts.append(bt + i * 0.01)
    if head:
        # the head hook travels along 120 degrees into the body start
        dx, dy = math.cos(math.radians(120)), math.sin(math.radians(120))
        x = [x[0] - i * step * dx for i in (3, 2, 1)] + x
        y = [y[0] - i * step * dy for i in (3, 2, 1)] + y
        ts = [ts[0] - 0.01 * i for i in (3, 2, 1)] + ts
    return trace_from(x, y, ts)


def test_dehook_removes_appended_hook():
    clean = line_with_hooks()
    hooked = line_with_hooks(tail=True)
    out = dehook(hooked, CFG)
    assert len(out) == len(clean)
    xo, yo, _, _ = out.arrays()
    xc, yc, _, _ = clean.arrays()
    assert np.allclose(xo, xc) and np.allclose(yo, yc)


def test_dehook_removes_hooks_at_both_ends():
    hooked = line_with_hooks(head=True, tail=True)
    out = dehook(hooked, CFG)
    assert len(out) == 101
    _, yo, _, _ = out.arrays()
    assert np.allclose(yo, 0.0)


def test_dehook_is_noop_on_clean_arc():
    t = np.linspace(0, 1, 101)
    phi = np.pi / 2 * t
    trace = trace_from(np.cos(phi), np.sin(phi), t)
    assert dehook(trace, CFG) == trace


def test_dehook_only_removes_terminal_points():
    hooked = line_with_hooks(head=True, tail=True)
    out = dehook(hooked, CFG)
    body = set(hooked.points[3:-3])
    assert set(out.points) <= body


def test_lowpass_keeps_dc():
    t = np.linspace(0, 1, 101)
    trace = trace_from(np.full(101, 3.25), np.full(101, -1.5), t)
    out = lowpass(trace, CFG)
    x, y, _, _ = out.arrays()
    assert np.max(np.abs(x - 3.25)) < 1e-9
    assert np.max(np.abs(y + 1.5)) < 1e-9


def designed_gain(freq_hz, cfg=CFG):
    # independent oracle: squared magnitude of the designed transfer function
    b, a = cheby1(cfg.filter_order, cfg.filter_ripple_db, cfg.filter_cutoff_hz / (cfg.resample_hz / 2))
    w, h = freqz(b, a, worN=[2 * np.pi * freq_hz / cfg.resample_hz])
    return float(np.abs(h[0]) ** 2)  # filtfilt applies the filter twice


def measured_gain(freq_hz):
    t = np.arange(0, 4, 1 / CFG.resample_hz)
    x = np.sin(2 * np.pi * freq_hz * t)
    out = lowpass(trace_from(x, np.zeros_like(t), t), CFG)
    xo, _, _, _ = out.arrays()
    core = slice(len(t) // 4, -len(t) // 4)  # ignore filtfilt edge transients
    return float(np.max(np.abs(xo[core])))


def test_lowpass_kills_40hz():
    gain = measured_gain(40.0)
    assert gain < 0.05
    assert gain == pytest.approx(designed_gain(40.0), abs=5e-3)


def test_lowpass_preserves_1hz_within_ripple():
    gain = measured_gain(1.0)
    ripple_floor = 10 ** (-2 * CFG.filter_ripple_db / 20)  # doubled by filtfilt
    assert ripple_floor <= gain <= 1.0 + 1e-6
    assert gain == pytest.approx(designed_gain(1.0), abs=1e-2)


def test_lowpass_preserves_point_counts_and_pen():
    rng = np.random.default_rng(5)
    n = 240
    t = np.arange(n) / 100
    pen = np.ones(n, dtype=int)
    pen[100:110] = 0
    trace = trace_from(rng.normal(size=n), rng.normal(size=n), t, pen)
    out = lowpass(trace, CFG)
    xo, yo, to, peno = out.arrays()
    # pen-up run collapses to one sample; pen-down counts preserved
    assert (peno == 1).sum() == 230
    assert (peno == 0).sum() == 1


def test_normalize_unit_square_just_centers():
    trace = trace_from([0, 1, 1, 0], [0, 0, 1, 1], [0.0, 0.1, 0.2, 0.3])
    out = normalize(trace, CFG)
    x, y, _, _ = out.arrays()
    assert np.allclose(sorted(x), [-0.5, -0.5, 0.5, 0.5])
    assert np.allclose(sorted(y), [-0.5, -0.5, 0.5, 0.5])


def test_normalize_scale_invariance():
    rng = np.random.default_rng(1)
    x, y = rng.normal(size=30), rng.normal(size=30)
    t = np.arange(30) * 0.01
    a = normalize(trace_from(x, y, t), CFG)
    b = normalize(trace_from(5 * x, 5 * y, t), CFG)
    xa, ya, _, _ = a.arrays()
    xb, yb, _, _ = b.arrays()
    assert np.max(np.abs(xa - xb)) < 1e-9
    assert np.max(np.abs(ya - yb)) < 1e-9


def test_normalize_bbox_height_property():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = int(rng.integers(2, 40))
        trace = trace_from(rng.normal(size=n), rng.normal(size=n), np.arange(n) * 0.01)
        out = normalize(trace, CFG)
        _, y, _, _ = out.arrays()
        if np.ptp(y) > 0:
            assert abs(np.ptp(y) - 1.0) < 1e-9


def test_normalize_zero_height_uses_width():
    trace = trace_from([0, 2], [1, 1], [0.0, 0.1])
    x, y, _, _ = normalize(trace, CFG).arrays()
    assert np.allclose(x, [-0.5, 0.5])
    assert np.allclose(y, 0.0)


def test_normalize_zero_extent_translates_only():
    trace = trace_from([3, 3], [4, 4], [0.0, 0.1])
    x, y, _, _ = normalize(trace, CFG).arrays()
    assert np.allclose(x, 0) and np.allclose(y, 0)


def test_cutoff_above_nyquist_rejected():
    with pytest.raises(ValueError):
        PreprocessConfig(resample_hz=20, filter_cutoff_hz=10)


def wiggly_trace(seed=9):
    rng = np.random.default_rng(seed)
    t = np.sort(rng.uniform(0, 1.5, 160))
    t[0], t[-1] = 0.0, 1.5
    x = np.cos(2 * np.pi * t) + 0.02 * rng.normal(size=len(t))
    y = np.sin(3 * np.pi * t) + 0.02 * rng.normal(size=len(t))
    return trace_from(x, y, t)


def test_pipeline_idempotent():
    once = preprocess(wiggly_trace(), CFG)
    twice = preprocess(once, CFG)
    xa, ya, _, _ = once.arrays()
    xb, yb, _, _ = twice.arrays()
    assert len(once) == len(twice)
    assert np.max(np.hypot(xa - xb, ya - yb)) < 1e-6


def test_normalize_commutes_with_translation():
    base = wiggly_trace()
    moved = base.replace_points(
        InkPoint(p.x + 7.25, p.y - 3.5, p.t, p.pen) for p in base.points
    )
    a = preprocess(base, CFG)
    b = preprocess(moved, CFG)
    xa, ya, _, _ = a.arrays()
    xb, yb, _, _ = b.arrays()
    assert np.max(np.hypot(xa - xb, ya - yb)) < 1e-9
