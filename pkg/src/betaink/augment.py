"""Label-preserving data augmentation: affine transforms and stroke jiggling.

Transforms are pure functions of an explicit draw, so corpora expand
deterministically from per-sample child seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ink import InkPoint, InkTrace

__all__ = ["AugmentConfig", "AffineDraw", "sample_affine_draw", "affine", "jiggle", "expand_corpus"]


@dataclass(frozen=True)
class AugmentConfig:
    rotate_deg_max: float = 10.0
    scale_range: tuple[float, float] = (0.8, 1.2)
    translate_frac: float = 0.1
    jiggle_sigma: float = 0.01  # fraction of bbox height
    flips: bool = False  # off: not label-preserving for most classes
    seed: int = 0

    def __post_init__(self):
        if self.rotate_deg_max < 0 or self.translate_frac < 0 or self.jiggle_sigma < 0:
            raise ValueError("augmentation ranges must be non-negative")
        lo, hi = self.scale_range
        if not 0 < lo <= hi:
            raise ValueError(f"bad scale range {self.scale_range}")


@dataclass(frozen=True)
class AffineDraw:
    rotate_rad: float = 0.0
    scale: float = 1.0
    translate: tuple[float, float] = (0.0, 0.0)
    flip_x: bool = False

    @property
    def is_identity(self) -> bool:
        return (
            self.rotate_rad == 0.0
            and self.scale == 1.0
            and self.translate == (0.0, 0.0)
            and not self.flip_x
        )


def sample_affine_draw(cfg: AugmentConfig, rng) -> AffineDraw:
    rot = math.radians(rng.uniform(-cfg.rotate_deg_max, cfg.rotate_deg_max))
    scale = rng.uniform(*cfg.scale_range)
    tx = rng.uniform(-cfg.translate_frac, cfg.translate_frac)
    ty = rng.uniform(-cfg.translate_frac, cfg.translate_frac)
    flip = bool(cfg.flips and rng.random() < 0.5)
    return AffineDraw(rot, scale, (tx, ty), flip)


def _bbox_center_height(trace: InkTrace):
    xmin, xmax, ymin, ymax = trace.bbox()
    return (xmin + xmax) / 2, (ymin + ymax) / 2, max(ymax - ymin, xmax - xmin)


def affine(trace: InkTrace, cfg: AugmentConfig, draw: AffineDraw) -> InkTrace:
    """Rotate/scale/translate about the bbox center; time and pen untouched.

    Translation is in fractions of the bbox extent.  An identity draw
    returns the input bit-identically.
    """
    if draw.is_identity:
        return trace
    cx, cy, extent = _bbox_center_height(trace)
    cos_r, sin_r = math.cos(draw.rotate_rad), math.sin(draw.rotate_rad)
    sx = -draw.scale if draw.flip_x else draw.scale
    tx, ty = draw.translate[0] * extent, draw.translate[1] * extent
    pts = []
    for p in trace.points:
        dx, dy = p.x - cx, p.y - cy
        dx *= sx
        dy *= draw.scale
        rx = dx * cos_r - dy * sin_r
        ry = dx * sin_r + dy * cos_r
        pts.append(InkPoint(cx + rx + tx, cy + ry + ty, p.t, p.pen))
    return trace.replace_points(pts)


def jiggle(trace: InkTrace, cfg: AugmentConfig, rng) -> InkTrace:
    """Smoothed Gaussian displacement scaled by jiggle_sigma * bbox height.

    Per-point noise convolved with a 5-sample triangular kernel; stroke
    endpoints stay pinned so no artificial hooks appear.
    """
    if cfg.jiggle_sigma == 0 or len(trace) < 3:
        return trace
    _, _, extent = _bbox_center_height(trace)
    sigma = cfg.jiggle_sigma * extent
    n = len(trace)
    noise = rng.normal(scale=sigma, size=(n, 2))
    kernel = np.array([1, 2, 3, 2, 1], dtype=float)
    kernel /= kernel.sum()
    pad = 2
    padded = np.pad(noise, ((pad, pad), (0, 0)), mode="edge")
    smooth = np.empty_like(noise)
    for c in (0, 1):
        smooth[:, c] = np.convolve(padded[:, c], kernel, mode="valid")
    taper = np.ones(n)
    taper[0] = taper[-1] = 0.0  # endpoints pinned
    if n > 3:
        taper[1] = taper[-2] = 0.5
    pts = [
        InkPoint(p.x + float(sx) * w, p.y + float(sy) * w, p.t, p.pen)
        for p, (sx, sy), w in zip(trace.points, smooth, taper)
    ]
    return trace.replace_points(pts)


def expand_corpus(corpus: list[InkTrace], cfg: AugmentConfig, multiplier: int) -> list[InkTrace]:
    """Originals plus (multiplier - 1) augmented replicas per sample.

    Deterministic: each replica uses a child seed derived from cfg.seed,
    the sample index and the replica index.
    """
    if multiplier < 1:
        raise ValueError("multiplier must be >= 1")
    out = list(corpus)
    for rep in range(1, multiplier):
        for idx, trace in enumerate(corpus):
            rng = np.random.default_rng((cfg.seed, rep, idx))
            t = affine(trace, cfg, sample_affine_draw(cfg, rng))
            t = jiggle(t, cfg, rng)
            out.append(t)
    return out
