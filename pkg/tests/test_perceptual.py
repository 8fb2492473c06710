import math

import numpy as np
import pytest

from betaink.beta import BetaProfile, SynthStroke, amplitude_for_arc_length, synthesize_trace
from betaink.fitting import EllipticArc, fold_angle
from betaink.ink import InkPoint
from betaink.perceptual import (
    Bpc,
    Epc,
    FuzzyRegions,
    compose_bpc,
    encode_sequence,
    epc_membership,
    handwriting_equation,
)
from betaink.segmentation import segment

from helpers import random_stroke_chain

REG = FuzzyRegions()
CST = REG.cst


def mu(angle):
    return epc_membership(angle, REG).as_array()


def test_region_centers_are_one_hot():
    assert mu(0.0).tolist() == [1, 0, 0, 0]
    assert mu(math.pi / 4).tolist() == [0, 1, 0, 0]
    assert mu(math.pi / 2).tolist() == [0, 0, 1, 0]
    assert mu(-math.pi / 4).tolist() == [0, 0, 0, 1]


def test_boundary_angle_splits_half_half():
    m = mu(math.pi / 8)
    assert m[Epc.VALLEY.value] == pytest.approx(0.5, abs=1e-12)
    assert m[Epc.RIGHT_OBLIQUE_SHAFT.value] == pytest.approx(0.5, abs=1e-12)


def test_band_edge_returns_full_membership():
    m = mu(math.pi / 8 + math.pi / 32)
    assert m[Epc.RIGHT_OBLIQUE_SHAFT.value] == pytest.approx(1.0, abs=1e-12)


def test_crossfade_is_linear_inside_band():
    b = math.pi / 8
    for frac in (-0.4, -0.1, 0.2, 0.45):
        angle = b + frac * CST
        m = mu(angle)
        assert m[Epc.VALLEY.value] == pytest.approx(0.5 - frac, abs=1e-12)
        assert m[Epc.RIGHT_OBLIQUE_SHAFT.value] == pytest.approx(0.5 + frac, abs=1e-12)


def test_membership_sums_to_one_over_sweep():
    angles = np.linspace(-math.pi / 2 + 1e-9, math.pi / 2, 10_000)
    for a in angles:
        assert abs(mu(a).sum() - 1.0) < 1e-9


def test_membership_continuity():
    angles = np.linspace(-math.pi / 2 + 1e-6, math.pi / 2, 20_001)
    prev = mu(angles[0])
    step = angles[1] - angles[0]
    slope_bound = step / CST + 1e-9
    for a in angles[1:]:
        cur = mu(a)
        assert np.max(np.abs(cur - prev)) <= slope_bound
        prev = cur


def test_angle_outside_fold_range_rejected():
    with pytest.raises(ValueError):
        epc_membership(2.0, REG)
    with pytest.raises(ValueError):
        epc_membership(-math.pi / 2, REG)


def test_rotation_by_quarter_pi_permutes_dominants():
    cycle = [Epc.VALLEY, Epc.RIGHT_OBLIQUE_SHAFT, Epc.SHAFT, Epc.LEFT_OBLIQUE_SHAFT]
    for angle in (0.0, math.pi / 4, math.pi / 2, -math.pi / 4):
        before = epc_membership(angle, REG).dominant()
        after = epc_membership(fold_angle(angle + math.pi / 4), REG).dominant()
        assert cycle[(cycle.index(before) + 1) % 4] is after


# ---------------------------------------------------------------------------
# encoding


def line_stroke(t0, t1, angle, length=1.0):
    arc = EllipticArc(0.0, 0.0, length / 2, 1e-6, fold_angle(angle), arc_start=math.pi)
    prof = BetaProfile(t0, t1, 2.0, 2.0, 1.0)
    amp = amplitude_for_arc_length(prof, length)
    return SynthStroke(BetaProfile(t0, t1, 2.0, 2.0, amp), arc)


def test_encode_one_hot_for_center_angles():
    chain = [
        line_stroke(0.0, 0.5, 0.0),
        line_stroke(0.5, 1.0, math.pi / 4),
        line_stroke(1.0, 1.5, math.pi / 2),
    ]
    trace = synthesize_trace(chain, 200)
    seq = encode_sequence(segment(trace), REG)
    assert seq.dominant_epcs() == [Epc.VALLEY, Epc.RIGHT_OBLIQUE_SHAFT, Epc.SHAFT]
    for item, expect in zip(seq.items, (1.0, 1.0, 1.0)):
        assert max(item.membership.mu) == pytest.approx(expect, abs=1e-6)


def test_encode_empty_errors():
    with pytest.raises(ValueError):
        encode_sequence([], REG)


def test_encode_v_shape_fixture():
    # down-stroke then up-stroke: a V written left to right
    chain = [
        line_stroke(0.0, 0.5, -math.pi / 4),
        line_stroke(0.5, 1.0, math.pi / 4),
    ]
    seq = encode_sequence(segment(synthesize_trace(chain, 200)), REG)
    assert seq.dominant_epcs() == [Epc.LEFT_OBLIQUE_SHAFT, Epc.RIGHT_OBLIQUE_SHAFT]


def test_encode_with_beta_attaches_ten_parameters():
    chain = random_stroke_chain(np.random.default_rng(0), 3)
    strokes = segment(synthesize_trace(chain, 200))
    seq = encode_sequence(strokes, REG, with_beta=True)
    for item in seq.items:
        assert item.beta_features is not None and len(item.beta_features) == 10


def test_encode_argmax_invariant_under_scale_and_translation():
    chain = random_stroke_chain(np.random.default_rng(5), 4)
    base = synthesize_trace(chain, 200)
    scaled = base.replace_points(
        InkPoint(3.0 * p.x + 10.0, 3.0 * p.y - 2.0, p.t, p.pen) for p in base.points
    )
    a = encode_sequence(segment(base), REG).dominant_epcs()
    b = encode_sequence(segment(scaled), REG).dominant_epcs()
    assert a == b


# ---------------------------------------------------------------------------
# BPC composition


V, R, S, L = Epc.VALLEY, Epc.RIGHT_OBLIQUE_SHAFT, Epc.SHAFT, Epc.LEFT_OBLIQUE_SHAFT


def names(spans):
    return [s.bpc for s in spans]


def test_three_valleys_form_one_valley_bpc():
    spans = compose_bpc([V, V, V])
    assert names(spans) == [Bpc.VALLEY]
    assert (spans[0].start, spans[0].stop) == (0, 3)


def test_six_valleys_still_one_group():
    spans = compose_bpc([V] * 6)
    assert names(spans) == [Bpc.VALLEY]
    assert (spans[0].start, spans[0].stop) == (0, 6)


@pytest.mark.parametrize("n", range(1, 20))
def test_identical_runs_emit_ceil_n_over_six_groups(n):
    spans = compose_bpc([S] * n)
    assert len(spans) == math.ceil(n / 6)
    assert all(sp.bpc is Bpc.SHAFT for sp in spans)
    assert spans[-1].stop == n


def test_concave_up_sweep_is_down_half_occlusion():
    assert names(compose_bpc([L, V, R])) == [Bpc.DOWN_HALF_OCCLUSION]


def test_concave_down_sweep_is_up_half_occlusion():
    assert names(compose_bpc([R, V, L])) == [Bpc.UP_HALF_OCCLUSION]


def test_left_and_right_half_occlusions():
    assert names(compose_bpc([R, S, L])) == [Bpc.LEFT_HALF_OCCLUSION]
    assert names(compose_bpc([L, S, R])) == [Bpc.RIGHT_HALF_OCCLUSION]


def test_full_cycle_is_occlusion():
    assert names(compose_bpc([V, R, S, L, V, R, S, L])) == [Bpc.OCCLUSION]
    assert names(compose_bpc([L, S, R, L, S, R])) == [Bpc.OCCLUSION]


def test_rotation_then_plain_runs():
    seq = [R, V, L, R, R, R, V, V, V]  # arc, then a diagonal, then a bar
    assert names(compose_bpc(seq)) == [Bpc.UP_HALF_OCCLUSION, Bpc.RIGHT_OBLIQUE_SHAFT, Bpc.VALLEY]


def test_leftover_short_runs_collapse_to_majority():
    assert names(compose_bpc([V, V])) == [Bpc.VALLEY]
    assert names(compose_bpc([V, S, V])) == [Bpc.VALLEY]


def test_compose_total_and_deterministic():
    rng = np.random.default_rng(17)
    for _ in range(300):
        seq = [Epc(int(v)) for v in rng.integers(0, 4, size=int(rng.integers(1, 25)))]
        spans = compose_bpc(seq)
        assert spans == compose_bpc(list(seq))
        cursor = 0
        for sp in spans:
            assert sp.start == cursor
            cursor = sp.stop
        assert cursor == len(seq)


def test_compose_empty_errors():
    with pytest.raises(ValueError):
        compose_bpc([])


# ---------------------------------------------------------------------------
# equation rendering


def seq_of(epcs):
    one_hot = {V: 0.0, R: math.pi / 4, S: math.pi / 2, L: -math.pi / 4}
    chain = []
    t = 0.0
    for e in epcs:
        chain.append(line_stroke(t, t + 0.4, one_hot[e]))
        t += 0.4
    return encode_sequence(segment(synthesize_trace(chain, 200)), REG)


def test_equation_single_valley():
    seq = seq_of([V, V, V])
    spans = compose_bpc(seq.dominant_epcs())
    assert handwriting_equation(seq, spans) == "handwriting={Valley[V,V,V]}"


def test_equation_two_bpcs_in_order():
    seq = seq_of([S, S, S, L, V, R])
    spans = compose_bpc(seq.dominant_epcs())
    rendered = handwriting_equation(seq, spans)
    assert rendered == "handwriting={Shaft[S,S,S],DownHalfOcclusion[L,V,R]}"


def test_equation_rejects_gaps():
    seq = seq_of([V, V, V])
    spans = compose_bpc(seq.dominant_epcs())
    with pytest.raises(ValueError):
        handwriting_equation(seq, [s for s in spans][1:] or [])
