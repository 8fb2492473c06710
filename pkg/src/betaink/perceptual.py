"""Fuzzy Elementary Perceptual Codes and the Basic Perceptual Code grammar.

Each segmented stroke maps to one of four direction classes (EPCs) by its
chord deviation angle, with fuzzy memberships that crossfade linearly
inside a small overlap band around every region boundary:

    Valley               around 0
    RightObliqueShaft    around  pi/4
    Shaft                around +-pi/2 (the fold wraps)
    LeftObliqueShaft     around -pi/4

Runs of EPCs compose into nine Basic Perceptual Codes: the four simple
ones plus five occlusion shapes.  The composer here is a deterministic
labeling rule used to annotate synthetic corpora and to unit-test the
sequence classifier; recognition itself is learned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .segmentation import ElliptiStroke

__all__ = [
    "Epc",
    "Bpc",
    "EpcMembership",
    "FuzzyRegions",
    "PerceptualItem",
    "PerceptualSequence",
    "epc_membership",
    "encode_sequence",
    "compose_bpc",
    "BpcSpan",
    "handwriting_equation",
]


class Epc(Enum):
    VALLEY = 0
    RIGHT_OBLIQUE_SHAFT = 1
    SHAFT = 2
    LEFT_OBLIQUE_SHAFT = 3

    @property
    def abbrev(self) -> str:
        return {"VALLEY": "V", "RIGHT_OBLIQUE_SHAFT": "R", "SHAFT": "S", "LEFT_OBLIQUE_SHAFT": "L"}[self.name]


class Bpc(Enum):
    VALLEY = "Valley"
    LEFT_OBLIQUE_SHAFT = "LeftObliqueShaft"
    SHAFT = "Shaft"
    RIGHT_OBLIQUE_SHAFT = "RightObliqueShaft"
    RIGHT_HALF_OCCLUSION = "RightHalfOcclusion"
    LEFT_HALF_OCCLUSION = "LeftHalfOcclusion"
    UP_HALF_OCCLUSION = "UpHalfOcclusion"
    DOWN_HALF_OCCLUSION = "DownHalfOcclusion"
    OCCLUSION = "Occlusion"

    @property
    def is_simple(self) -> bool:
        return self in _SIMPLE_BPC


_SIMPLE_BPC = {Bpc.VALLEY, Bpc.LEFT_OBLIQUE_SHAFT, Bpc.SHAFT, Bpc.RIGHT_OBLIQUE_SHAFT}

_SIMPLE_FOR_EPC = {
    Epc.VALLEY: Bpc.VALLEY,
    Epc.LEFT_OBLIQUE_SHAFT: Bpc.LEFT_OBLIQUE_SHAFT,
    Epc.SHAFT: Bpc.SHAFT,
    Epc.RIGHT_OBLIQUE_SHAFT: Bpc.RIGHT_OBLIQUE_SHAFT,
}


@dataclass(frozen=True)
class EpcMembership:
    """Fuzzy membership over the four EPCs; entries sum to 1."""

    mu: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.mu) != 4:
            raise ValueError("membership needs exactly 4 entries")

    def dominant(self) -> Epc:
        return Epc(int(np.argmax(self.mu)))

    def as_array(self):
        return np.asarray(self.mu, dtype=float)


@dataclass(frozen=True)
class FuzzyRegions:
    """Angular regions tiling (-pi/2, pi/2] plus the crossfade width ``cst``."""

    centers: tuple[float, float, float, float] = (0.0, math.pi / 4, math.pi / 2, -math.pi / 4)
    half_width: float = math.pi / 8
    cst: float = math.pi / 16

    def __post_init__(self):
        if not 0 < self.cst <= self.half_width:
            raise ValueError("cst must be in (0, half_width]")


# region boundaries in fold space, each sitting between (lower epc, upper epc)
_BOUNDARIES = (
    (-3 * math.pi / 8, Epc.SHAFT, Epc.LEFT_OBLIQUE_SHAFT),
    (-math.pi / 8, Epc.LEFT_OBLIQUE_SHAFT, Epc.VALLEY),
    (math.pi / 8, Epc.VALLEY, Epc.RIGHT_OBLIQUE_SHAFT),
    (3 * math.pi / 8, Epc.RIGHT_OBLIQUE_SHAFT, Epc.SHAFT),
)


def _owning_region(angle: float) -> Epc:
    a = abs(angle)
    if a <= math.pi / 8:
        return Epc.VALLEY
    if a >= 3 * math.pi / 8:
        return Epc.SHAFT
    return Epc.RIGHT_OBLIQUE_SHAFT if angle > 0 else Epc.LEFT_OBLIQUE_SHAFT


def epc_membership(chord_angle: float, regions: FuzzyRegions | None = None) -> EpcMembership:
    """Trapezoidal fuzzy membership of a folded chord angle over the EPCs.

    Inside the crossfade band of width ``cst`` centered on a region
    boundary B, the two neighbors share membership linearly:
    mu_lower = 0.5 - (angle - B)/cst, mu_upper = 1 - mu_lower.  Everywhere
    else the owning region holds full membership.
    """
    regions = regions or FuzzyRegions()
    if not (-math.pi / 2 < chord_angle <= math.pi / 2 + 1e-15):
        raise ValueError(f"angle {chord_angle} outside the fold range (-pi/2, pi/2]")
    mu = [0.0, 0.0, 0.0, 0.0]
    for boundary, lower, upper in _BOUNDARIES:
        if abs(chord_angle - boundary) < regions.cst / 2:
            lo = 0.5 - (chord_angle - boundary) / regions.cst
            mu[lower.value] = lo
            mu[upper.value] = 1.0 - lo
            return EpcMembership(tuple(mu))
    mu[_owning_region(chord_angle).value] = 1.0
    return EpcMembership(tuple(mu))


@dataclass(frozen=True)
class PerceptualItem:
    membership: EpcMembership
    chord_angle: float
    beta_features: tuple[float, ...] | None = None
    degenerate: bool = False


@dataclass(frozen=True)
class PerceptualSequence:
    items: tuple[PerceptualItem, ...]
    label: str | None = None

    def __len__(self):
        return len(self.items)

    def dominant_epcs(self) -> list[Epc]:
        return [item.membership.dominant() for item in self.items]


_FEATURE_ORDER = ("p", "q", "t0", "t1", "amplitude", "a", "b", "x0", "y0", "theta")


def encode_sequence(
    strokes: list[ElliptiStroke],
    regions: FuzzyRegions | None = None,
    with_beta: bool = False,
    label: str | None = None,
) -> PerceptualSequence:
    """Map segmented strokes to an ordered fuzzy EPC sequence.

    Degenerate strokes carry uniform membership and a degeneracy mark.
    """
    if not strokes:
        raise ValueError("cannot encode an empty stroke list")
    regions = regions or FuzzyRegions()
    items = []
    for s in strokes:
        if s.degenerate:
            membership = EpcMembership((0.25, 0.25, 0.25, 0.25))
        else:
            membership = epc_membership(s.chord_angle, regions)
        beta_features = None
        if with_beta:
            params = s.parameters()
            beta_features = tuple(float(params[k]) for k in _FEATURE_ORDER)
        items.append(PerceptualItem(membership, s.chord_angle, beta_features, s.degenerate))
    return PerceptualSequence(tuple(items), label=label)


# ---------------------------------------------------------------------------
# BPC composition (labeling oracle, not the recognizer)


@dataclass(frozen=True)
class BpcSpan:
    bpc: Bpc
    start: int
    stop: int  # half-open


def _rotation_run(epcs: list[Epc], start: int):
    """Longest monotone-rotation run from ``start``; returns (stop, total_steps).

    The cyclic region order is V -> R -> S -> L -> V.  Steps must share
    one sign.  A step of 2 means the chord hopped across a whole region
    between samples and inherits the run's sign; a single region repeat
    (step 0) is tolerated mid-sweep since over-segmentation splits one
    sub-arc into two same-region chords, but two repeats in a row read as
    a plain run.  Runs may not end on hops or repeats, and accumulation
    caps past a full fold-circle lap.
    """
    steps: list[int] = []
    sign = 0
    zeros_in_a_row = 0
    i = start
    while i + 1 < len(epcs):
        diff = (epcs[i + 1].value - epcs[i].value) % 4
        if diff == 0:
            if zeros_in_a_row >= 1:
                break
            zeros_in_a_row += 1
            s = 0
        else:
            zeros_in_a_row = 0
            if diff == 1:
                s = 1
            elif diff == 3:
                s = -1
            else:  # ambiguous half-turn hop
                if sign == 0:
                    break
                s = 2 * sign
            if sign and (s > 0) != (sign > 0):
                # a repeat right at a rotation reversal belongs to the next shape
                if steps and steps[-1] == 0:
                    steps.pop()
                    i -= 1
                break
            sign = 1 if s > 0 else -1
        steps.append(s)
        i += 1
        if abs(sum(steps)) >= 9:
            break
    while steps:
        # a trailing repeat or hop whose region continues past the run is
        # the next shape's opening, not part of this sweep
        continues = i + 1 < len(epcs) and epcs[i + 1] is epcs[i]
        if steps[-1] == 0 and continues:
            steps.pop()
            i -= 1
            continue
        if abs(steps[-1]) == 2 and continues:
            steps.pop()
            i -= 1
            continue
        break
    if sum(1 for s in steps if s) < 2:
        return start, 0
    return i + 1, sum(steps)


_HALF_OCCLUSION = {
    (Epc.VALLEY, 1): Bpc.DOWN_HALF_OCCLUSION,
    (Epc.VALLEY, -1): Bpc.UP_HALF_OCCLUSION,
    (Epc.SHAFT, 1): Bpc.LEFT_HALF_OCCLUSION,
    (Epc.SHAFT, -1): Bpc.RIGHT_HALF_OCCLUSION,
    (Epc.RIGHT_OBLIQUE_SHAFT, 1): Bpc.DOWN_HALF_OCCLUSION,
    (Epc.RIGHT_OBLIQUE_SHAFT, -1): Bpc.UP_HALF_OCCLUSION,
    (Epc.LEFT_OBLIQUE_SHAFT, 1): Bpc.LEFT_HALF_OCCLUSION,
    (Epc.LEFT_OBLIQUE_SHAFT, -1): Bpc.RIGHT_HALF_OCCLUSION,
}


def _occlusion_variant(run: list[Epc], total: int) -> Bpc:
    if abs(total) >= 5:
        return Bpc.OCCLUSION
    mid = run[len(run) // 2] if len(run) % 2 == 1 else None
    if mid is None:
        pair = {run[len(run) // 2 - 1], run[len(run) // 2]}
        # a pair straddling the vertical behaves like a Shaft middle
        mid = Epc.SHAFT if pair == {Epc.RIGHT_OBLIQUE_SHAFT, Epc.LEFT_OBLIQUE_SHAFT} else run[len(run) // 2]
    return _HALF_OCCLUSION[(mid, 1 if total > 0 else -1)]


def compose_bpc(epcs: list[Epc]) -> list[BpcSpan]:
    """Group a crisp EPC sequence into Basic Perceptual Codes.

    Deterministic and total: monotone direction rotations become occlusion
    shapes, runs of 3-6 identical EPCs become the same-named simple BPC,
    and leftovers collapse to the simple BPC of their majority EPC.
    """
    if not epcs:
        raise ValueError("cannot compose an empty EPC sequence")
    spans: list[BpcSpan] = []
    leftover_start = None
    i = 0

    def flush_leftover(end):
        nonlocal leftover_start
        if leftover_start is None:
            return
        chunk = epcs[leftover_start:end]
        counts = {}
        for e in chunk:
            counts[e] = counts.get(e, 0) + 1
        majority = max(counts, key=lambda e: (counts[e], -chunk.index(e)))
        spans.append(BpcSpan(_SIMPLE_FOR_EPC[majority], leftover_start, end))
        leftover_start = None

    while i < len(epcs):
        stop, total = _rotation_run(epcs, i)
        if stop > i:
            flush_leftover(i)
            spans.append(BpcSpan(_occlusion_variant(epcs[i:stop], total), i, stop))
            i = stop
            continue
        run_end = i
        while run_end < len(epcs) and epcs[run_end] is epcs[i]:
            run_end += 1
        run_len = run_end - i
        if run_len >= 3:
            flush_leftover(i)
            take = min(run_len, 6)
            spans.append(BpcSpan(_SIMPLE_FOR_EPC[epcs[i]], i, i + take))
            i += take
            continue
        if leftover_start is None:
            leftover_start = i
        i = run_end
    flush_leftover(len(epcs))
    return spans


def handwriting_equation(seq: PerceptualSequence, spans: list[BpcSpan]) -> str:
    """Render the symbolic decomposition, e.g. ``handwriting={Valley[V,V,V]}``."""
    if not spans:
        raise ValueError("no spans to render")
    ordered = sorted(spans, key=lambda s: s.start)
    cursor = 0
    parts = []
    for span in ordered:
        if span.start != cursor:
            raise ValueError(f"span gap at item {cursor}")
        cursor = span.stop
        epcs = seq.dominant_epcs()[span.start:span.stop]
        parts.append(f"{span.bpc.value}[{','.join(e.abbrev for e in epcs)}]")
    if cursor != len(seq):
        raise ValueError(f"spans stop at {cursor}, sequence has {len(seq)} items")
    return "handwriting={" + ",".join(parts) + "}"
