"""Synthetic labeled ink corpora and noise injection.

The character classes here are built from three primitive shapes, each
rendered as a chain of Beta-elliptic strokes whose chords land on the
fuzzy region centers (maximal margin against the crossfade bands):

* line(angle): three collinear strokes; composes to the same-named
  simple BPC;
* arc(bulge): a 135-degree circular arc in three strokes; composes to
  the matching half-occlusion;
* loop: a full turn in eight strokes; composes to Occlusion.

Ten digit-like and eight letter-like classes combine these with distinct
BPC decompositions and stroke counts (documented in ``default_*_specs``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beta import BetaProfile, SynthStroke, amplitude_for_arc_length, synthesize_trace
from .fitting import EllipticArc, fold_angle
from .ink import InkTrace
from .perceptual import Bpc

__all__ = [
    "TemplatePrimitive",
    "SyntheticClassSpec",
    "NoiseSpec",
    "default_digit_specs",
    "default_letter_specs",
    "render_sample",
    "synth_corpus",
    "add_noise",
]

# (arc_start_deg, direction, [for arcs] nominal sweep 135) per occlusion bulge
_ARC_GEOMETRY = {
    Bpc.DOWN_HALF_OCCLUSION: (202.5, 1),
    Bpc.UP_HALF_OCCLUSION: (157.5, -1),
    Bpc.LEFT_HALF_OCCLUSION: (112.5, 1),
    Bpc.RIGHT_HALF_OCCLUSION: (67.5, -1),
}

_LINE_ANGLE = {
    Bpc.VALLEY: 0.0,
    Bpc.RIGHT_OBLIQUE_SHAFT: math.pi / 4,
    Bpc.SHAFT: math.pi / 2,
    Bpc.LEFT_OBLIQUE_SHAFT: -math.pi / 4,
}


@dataclass(frozen=True)
class TemplatePrimitive:
    """One shape in a class template: a BPC plus nominal geometry."""

    bpc: Bpc
    angle: float = 0.0  # extra rotation on top of the shape's nominal pose
    size: float = 1.0
    strokes: int = 0  # 0: the shape's natural count (3, or 8 for loops)
    lift_after: bool = False
    jump_after: tuple[float, float] = (0.0, 0.0)

    @property
    def stroke_count(self) -> int:
        if self.strokes:
            return self.strokes
        return 8 if self.bpc is Bpc.OCCLUSION else 3


@dataclass(frozen=True)
class SyntheticClassSpec:
    """A class name, its template, and per-parameter jitter ranges."""

    name: str
    template: tuple[TemplatePrimitive, ...]
    angle_jitter: float = 0.10  # radians, per primitive
    size_jitter: float = 0.15  # relative
    stroke_duration: tuple[float, float] = (0.13, 0.19)  # seconds, per stroke
    pq_range: tuple[float, float] = (1.8, 2.7)
    sweep_jitter: float = 0.10  # relative, arcs and loops

    def expected_bpcs(self) -> list[Bpc]:
        return [prim.bpc for prim in self.template]

    def stroke_count(self) -> int:
        return sum(prim.stroke_count for prim in self.template)


def _circle_arc_strokes(prim, rng, spec, t, rotate):
    """Render an occlusion primitive as equal sub-arcs of one circle."""
    r = prim.size * 0.5 * (1.0 + rng.uniform(-spec.size_jitter, spec.size_jitter))
    n = prim.stroke_count
    if prim.bpc is Bpc.OCCLUSION:
        start_deg, direction = 22.5, 1
        sweep = 2 * math.pi
    else:
        start_deg, direction = _ARC_GEOMETRY[prim.bpc]
        sweep = math.radians(135.0)
    sweep *= 1.0 + rng.uniform(-spec.sweep_jitter, spec.sweep_jitter)
    # shifting the start angle rotates every chord by the same amount
    phi = math.radians(start_deg) + prim.angle + rotate
    out = []
    for i in range(n):
        dur = rng.uniform(*spec.stroke_duration)
        sub = sweep / n
        length = r * sub
        p = rng.uniform(*spec.pq_range)
        q = rng.uniform(*spec.pq_range)
        prof = BetaProfile(t, t + dur, p, q, 1.0)
        amp = amplitude_for_arc_length(prof, length)
        arc = EllipticArc(0.0, 0.0, r, r, 0.0, arc_start=phi)
        last = i == n - 1
        out.append(
            SynthStroke(
                BetaProfile(t, t + dur, p, q, amp),
                arc,
                direction,
                lift_after=prim.lift_after and last,
                jump_after=prim.jump_after if last else (0.0, 0.0),
            )
        )
        phi += direction * sub
        t += dur
    return out, t


def _line_strokes(prim, rng, spec, t, rotate):
    angle = _LINE_ANGLE[prim.bpc] + prim.angle + rotate
    angle += rng.uniform(-spec.angle_jitter, spec.angle_jitter)
    total = prim.size * (1.0 + rng.uniform(-spec.size_jitter, spec.size_jitter))
    n = prim.stroke_count
    out = []
    for i in range(n):
        dur = rng.uniform(*spec.stroke_duration)
        length = total / n * (1.0 + rng.uniform(-0.2, 0.2))
        p = rng.uniform(*spec.pq_range)
        q = rng.uniform(*spec.pq_range)
        prof = BetaProfile(t, t + dur, p, q, 1.0)
        amp = amplitude_for_arc_length(prof, length)
        arc = EllipticArc(0.0, 0.0, length / 2, 1e-6, fold_angle(angle), arc_start=math.pi)
        last = i == n - 1
        out.append(
            SynthStroke(
                BetaProfile(t, t + dur, p, q, amp),
                arc,
                1,
                lift_after=prim.lift_after and last,
                jump_after=prim.jump_after if last else (0.0, 0.0),
            )
        )
        t += dur
    return out, t


def render_sample(spec: SyntheticClassSpec, rng, sample_hz: float = 100.0) -> InkTrace:
    """Render one labeled trace from a class template."""
    rotate = rng.uniform(-spec.angle_jitter, spec.angle_jitter)  # whole-sample pose
    strokes: list[SynthStroke] = []
    t = 0.0
    for prim in spec.template:
        if prim.bpc in _LINE_ANGLE:
            chunk, t_next = _line_strokes(prim, rng, spec, t, rotate)
        else:
            chunk, t_next = _circle_arc_strokes(prim, rng, spec, t, rotate)
        strokes.extend(chunk)
        t = t_next
        if prim.lift_after:
            t += 0.12  # pen-up gap
    trace = synthesize_trace(strokes, sample_hz)
    return InkTrace(trace.points, label=spec.name, meta={"source": "synth"})


def default_digit_specs() -> list[SyntheticClassSpec]:
    """Ten digit-like classes; BPC decompositions in the comments."""
    P = TemplatePrimitive
    B = Bpc
    return [
        # d0: one loop                                   [Occ]           8 strokes
        SyntheticClassSpec("d0", (P(B.OCCLUSION),)),
        # d1: vertical bar                               [S]             3
        SyntheticClassSpec("d1", (P(B.SHAFT),)),
        # d2: top arc, slash down, base bar              [U-H-O, R-O-S, V]  9
        SyntheticClassSpec(
            "d2",
            (P(B.UP_HALF_OCCLUSION), P(B.RIGHT_OBLIQUE_SHAFT), P(B.VALLEY)),
        ),
        # d3: two right bulges, pen lift between         [R-H-O, R-H-O]  6
        SyntheticClassSpec(
            "d3",
            (
                P(B.RIGHT_HALF_OCCLUSION, lift_after=True, jump_after=(0.0, -1.0)),
                P(B.RIGHT_HALF_OCCLUSION),
            ),
        ),
        # d4: down diagonal, base bar, lifted vertical   [L-O-S, V, S]   9
        SyntheticClassSpec(
            "d4",
            (
                P(B.LEFT_OBLIQUE_SHAFT),
                P(B.VALLEY, lift_after=True, jump_after=(-0.3, 0.9)),
                P(B.SHAFT),
            ),
        ),
        # d5: top bar, down stroke, right bulge          [V, S, R-H-O]   9
        SyntheticClassSpec(
            "d5",
            (P(B.VALLEY), P(B.SHAFT), P(B.RIGHT_HALF_OCCLUSION)),
        ),
        # d6: lead-in diagonal, loop                     [L-O-S, Occ]    11
        SyntheticClassSpec("d6", (P(B.LEFT_OBLIQUE_SHAFT), P(B.OCCLUSION))),
        # d7: top bar, slash down                        [V, R-O-S]      6
        SyntheticClassSpec("d7", (P(B.VALLEY), P(B.RIGHT_OBLIQUE_SHAFT))),
        # d8: two loops, pen lift between                [Occ, Occ]      16
        SyntheticClassSpec(
            "d8",
            (P(B.OCCLUSION, lift_after=True, jump_after=(0.0, -1.1)), P(B.OCCLUSION)),
        ),
        # d9: loop, then a down stroke                   [Occ, S]        11
        SyntheticClassSpec("d9", (P(B.OCCLUSION), P(B.SHAFT))),
    ]


def default_letter_specs() -> list[SyntheticClassSpec]:
    """Eight letter-like classes."""
    P = TemplatePrimitive
    B = Bpc
    return [
        SyntheticClassSpec("c", (P(B.LEFT_HALF_OCCLUSION),)),               # [L-H-O]     3
        SyntheticClassSpec("o", (P(B.OCCLUSION),)),                         # [Occ]       8
        SyntheticClassSpec("u", (P(B.DOWN_HALF_OCCLUSION),)),               # [D-H-O]     3
        SyntheticClassSpec("n", (P(B.UP_HALF_OCCLUSION),)),                 # [U-H-O]     3
        SyntheticClassSpec(
            "v", (P(B.LEFT_OBLIQUE_SHAFT), P(B.RIGHT_OBLIQUE_SHAFT))        # [L-O-S, R-O-S] 6
        ),
        SyntheticClassSpec(
            "w",
            (
                P(B.LEFT_OBLIQUE_SHAFT),
                P(B.RIGHT_OBLIQUE_SHAFT),
                P(B.LEFT_OBLIQUE_SHAFT),
                P(B.RIGHT_OBLIQUE_SHAFT),
            ),                                                              # 12
        ),
        SyntheticClassSpec(
            "s", (P(B.RIGHT_HALF_OCCLUSION), P(B.LEFT_HALF_OCCLUSION))      # [R-H-O, L-H-O] 6
        ),
        SyntheticClassSpec(
            "z", (P(B.VALLEY), P(B.RIGHT_OBLIQUE_SHAFT), P(B.VALLEY))       # [V, R-O-S, V]  9
        ),
    ]


def synth_corpus(specs: list[SyntheticClassSpec], per_class: int, seed: int = 0, sample_hz: float = 100.0) -> list[InkTrace]:
    """Deterministic labeled corpus: ``per_class`` renders of every spec."""
    if per_class < 1:
        raise ValueError("per_class must be >= 1")
    out = []
    for si, spec in enumerate(specs):
        for j in range(per_class):
            rng = np.random.default_rng((seed, si, j))
            try:
                out.append(render_sample(spec, rng, sample_hz))
            except ValueError as exc:
                raise ValueError(f"class spec {spec.name!r} failed to render: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# noise


@dataclass(frozen=True)
class NoiseSpec:
    """Positional corruption; sigma is a fraction of the trace bbox height."""

    kind: str = "gaussian_jitter"  # gaussian_jitter | tremble
    sigma: float = 0.02
    tremble_hz: float = 25.0
    apply_to: str = "both"  # train | test | both

    def __post_init__(self):
        if self.kind not in ("gaussian_jitter", "tremble"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.apply_to not in ("train", "test", "both"):
            raise ValueError(f"bad apply_to {self.apply_to!r}")


def _noisy_trace(trace: InkTrace, spec: NoiseSpec, rng) -> InkTrace:
    if spec.sigma == 0:
        return trace
    xmin, xmax, ymin, ymax = trace.bbox()
    scale = spec.sigma * max(ymax - ymin, xmax - xmin, 1e-9)
    x, y, t, pen = trace.arrays()
    if spec.kind == "gaussian_jitter":
        x = x + rng.normal(scale=scale, size=len(x))
        y = y + rng.normal(scale=scale, size=len(y))
    else:
        # tremble: sinusoidal displacement, randomized per trace in both
        # phase and frequency (tremble_hz is the upper band edge)
        hz = spec.tremble_hz * rng.uniform(0.7, 1.0)
        px, py = rng.uniform(0, 2 * math.pi, size=2)
        x = x + scale * np.sin(2 * math.pi * hz * t + px)
        y = y + scale * np.sin(2 * math.pi * hz * t + py)
    return InkTrace.from_arrays(x, y, t, pen, label=trace.label, meta=dict(trace.meta))


def add_noise(corpus: list[InkTrace], spec: NoiseSpec, seed: int = 0) -> list[InkTrace]:
    """Deterministically corrupt every trace in the corpus."""
    out = []
    for idx, trace in enumerate(corpus):
        rng = np.random.default_rng((seed, idx))
        out.append(_noisy_trace(trace, spec, rng))
    return out
