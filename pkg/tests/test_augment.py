import math

import numpy as np
import pytest

from betaink.augment import (
    AffineDraw,
    AugmentConfig,
    affine,
    expand_corpus,
    jiggle,
    sample_affine_draw,
)
from betaink.beta import synthesize_trace
from betaink.ink import InkTrace
from betaink.perceptual import encode_sequence
from betaink.segmentation import segment

from helpers import line_stroke, random_stroke_chain

CFG = AugmentConfig()


def a_trace(seed=0, k=3):
    rng = np.random.default_rng(seed)
    trace = synthesize_trace(random_stroke_chain(rng, k), 200)
    return InkTrace(trace.points, label="x", meta={"src": "synth"})


def test_identity_draw_is_bit_identical():
    trace = a_trace()
    assert affine(trace, CFG, AffineDraw()) is trace


def test_zero_range_config_samples_identity():
    cfg = AugmentConfig(rotate_deg_max=0, scale_range=(1.0, 1.0), translate_frac=0)
    draw = sample_affine_draw(cfg, np.random.default_rng(0))
    assert draw.rotate_rad == 0 and draw.scale == 1.0 and draw.translate == (0.0, 0.0)


def test_pure_quarter_rotation_turns_horizontal_line_vertical():
    t = np.linspace(0, 1, 11)
    trace = InkTrace.from_arrays(t, np.zeros_like(t), t, np.ones_like(t, dtype=int))
    out = affine(trace, CFG, AffineDraw(rotate_rad=math.pi / 2))
    x, y, _, _ = out.arrays()
    assert np.max(np.abs(x - 0.5)) < 1e-12  # collapsed onto the pivot column
    assert np.ptp(y) == pytest.approx(1.0, abs=1e-12)


def test_affine_preserves_label_points_and_stroke_count():
    rng = np.random.default_rng(1)
    trace = a_trace(1, k=4)
    base_strokes = len(segment(trace))
    for _ in range(50):
        draw = sample_affine_draw(CFG, rng)
        out = affine(trace, CFG, draw)
        assert out.label == trace.label
        assert len(out) == len(trace)
        assert [p.t for p in out.points] == [p.t for p in trace.points]
        assert [p.pen for p in out.points] == [p.pen for p in trace.points]
        assert len(segment(out)) == base_strokes


def test_jiggle_sigma_zero_is_identity():
    trace = a_trace(2)
    cfg = AugmentConfig(jiggle_sigma=0.0)
    assert jiggle(trace, cfg, np.random.default_rng(0)) is trace


def test_jiggle_displacement_bounded_and_endpoints_pinned():
    trace = a_trace(3)
    xmin, xmax, ymin, ymax = trace.bbox()
    extent = max(ymax - ymin, xmax - xmin)
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(2000):
        out = jiggle(trace, CFG, rng)
        assert out.points[0] == trace.points[0]
        assert out.points[-1] == trace.points[-1]
        d = max(
            math.hypot(a.x - b.x, a.y - b.y)
            for a, b in zip(out.points, trace.points)
        )
        worst = max(worst, d)
    assert worst <= 4 * CFG.jiggle_sigma * extent


def test_jiggle_keeps_dominant_epcs_on_region_center_fixture():
    # chords at the region centers (maximal margin to the crossfade
    # bands), run through the full pipeline: jiggle noise is high
    # frequency and the preprocessing low-pass removes it
    from betaink.preprocess import PreprocessConfig, preprocess

    pp = PreprocessConfig(resample_hz=200, filter_cutoff_hz=12)
    chain = [
        line_stroke(0.0, 0.4, 0.0),
        line_stroke(0.4, 0.8, math.pi / 4),
        line_stroke(0.8, 1.2, math.pi / 2),
        line_stroke(1.2, 1.6, -math.pi / 4),
    ]
    def collapsed_epcs(t):
        epcs = encode_sequence(segment(t)).dominant_epcs()
        return [e for e, prev in zip(epcs, [None] + epcs) if e is not prev]

    trace = synthesize_trace(chain, 200)
    base = collapsed_epcs(preprocess(trace, pp))
    assert len(base) == 4
    rng = np.random.default_rng(1)
    for _ in range(20):
        # a spurious extra boundary may split a stroke, but every stroke
        # keeps its template's dominant EPC
        assert collapsed_epcs(preprocess(jiggle(trace, CFG, rng), pp)) == base


def test_expand_corpus_counts_and_originals():
    corpus = [a_trace(i) for i in range(10)]
    out = expand_corpus(corpus, CFG, 3)
    assert len(out) == 30
    assert out[:10] == corpus
    labels = [t.label for t in out]
    assert labels.count("x") == 30  # histogram scales uniformly


def test_expand_corpus_multiplier_one_is_identity():
    corpus = [a_trace(0)]
    assert expand_corpus(corpus, CFG, 1) == corpus


def test_expand_corpus_deterministic():
    corpus = [a_trace(i) for i in range(4)]
    a = expand_corpus(corpus, CFG, 3)
    b = expand_corpus(corpus, CFG, 3)
    assert a == b
