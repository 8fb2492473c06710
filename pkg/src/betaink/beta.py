"""Beta velocity profiles and the Beta-elliptic trajectory synthesizer.

A handwriting stroke's curvilinear speed is modeled as a scaled Beta
impulse over a finite support [t0, t1],

    beta(t) = ((t - t0) / (tc - t0))**p * ((t1 - t) / (t1 - tc))**q

with tc = (p*t1 + q*t0) / (p + q), so beta(tc) = 1 and beta vanishes at
and outside the support.  The spatial path of a stroke follows an elliptic
arc; a full trajectory is the superposition of the per-stroke velocity
contributions.  The synthesizer here inverts the segmentation problem and
doubles as its test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fitting import EllipticArc
from .ink import InkPoint, InkTrace

__all__ = [
    "BetaProfile",
    "beta",
    "beta_param_gradients",
    "beta_area",
    "SynthStroke",
    "traveled_length",
    "synthesize_trace",
    "amplitude_for_arc_length",
]


@dataclass(frozen=True)
class BetaProfile:
    """Normalized Beta impulse: support, shape (p, q) and peak speed."""

    t0: float
    t1: float
    p: float
    q: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.t0 < self.t1:
            raise ValueError(f"need t0 < t1, got [{self.t0}, {self.t1}]")
        if self.p <= 0 or self.q <= 0:
            raise ValueError(f"p and q must be positive, got p={self.p}, q={self.q}")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")

    @property
    def tc(self) -> float:
        """Instant of peak velocity."""
        return (self.p * self.t1 + self.q * self.t0) / (self.p + self.q)


def beta(t, profile: BetaProfile):
    """Evaluate the normalized Beta impulse; 0 at and outside the support.

    Accepts scalars or arrays.
    """
    t = np.asarray(t, dtype=float)
    t0, t1, p, q = profile.t0, profile.t1, profile.p, profile.q
    tc = profile.tc
    out = np.zeros_like(t)
    inside = (t > t0) & (t < t1)
    ti = t[inside]
    out[inside] = ((ti - t0) / (tc - t0)) ** p * ((t1 - ti) / (t1 - tc)) ** q
    if out.ndim == 0:
        return float(out)
    return out


def beta_param_gradients(t, profile: BetaProfile):
    """(d beta / d p, d beta / d q) at t.

    The tc(p, q) dependence cancels exactly, leaving
    beta * log((t-t0)/(tc-t0)) and beta * log((t1-t)/(t1-tc)).
    """
    t = np.asarray(t, dtype=float)
    t0, t1 = profile.t0, profile.t1
    tc = profile.tc
    b = beta(t, profile)
    db_dp = np.zeros_like(t)
    db_dq = np.zeros_like(t)
    inside = (t > t0) & (t < t1)
    ti = t[inside]
    bi = np.asarray(b)[inside]
    db_dp[inside] = bi * np.log((ti - t0) / (tc - t0))
    db_dq[inside] = bi * np.log((t1 - ti) / (t1 - tc))
    if db_dp.ndim == 0:
        return float(db_dp), float(db_dq)
    return db_dp, db_dq


def beta_area(profile: BetaProfile) -> float:
    """Integral of amplitude * beta over the support (closed form).

    With s = (t - t0)/(t1 - t0) and sc = p/(p+q) the integral reduces to
    (t1 - t0) * B(p+1, q+1) / (sc**p * (1-sc)**q) times the amplitude,
    where B is Euler's Beta function.
    """
    p, q = profile.p, profile.q
    sc = p / (p + q)
    lnB = math.lgamma(p + 1) + math.lgamma(q + 1) - math.lgamma(p + q + 2)
    norm = math.exp(lnB - p * math.log(sc) - q * math.log(1 - sc))
    return profile.amplitude * (profile.t1 - profile.t0) * norm


def amplitude_for_arc_length(profile: BetaProfile, arc_length: float) -> float:
    """Amplitude making the profile's speed integral equal ``arc_length``."""
    unit = beta_area(BetaProfile(profile.t0, profile.t1, profile.p, profile.q, 1.0))
    return arc_length / unit


@dataclass(frozen=True)
class SynthStroke:
    """One generative stroke: a Beta impulse riding an elliptic arc.

    ``direction`` is the sign of the parametric sweep; ``lift_after``
    inserts a pen-up gap after the stroke, optionally jumping the pen by
    ``jump_after`` before the next stroke starts.
    """

    beta: BetaProfile
    arc: EllipticArc
    direction: int = 1
    lift_after: bool = False
    jump_after: tuple[float, float] = (0.0, 0.0)


def _ellipse_point(arc: EllipticArc, phi):
    ct, st = math.cos(arc.theta), math.sin(arc.theta)
    ex = arc.a * np.cos(phi)
    ey = arc.b * np.sin(phi)
    return ex * ct - ey * st, ex * st + ey * ct


def _ellipse_speed_radius(arc: EllipticArc, phi):
    return np.hypot(arc.a * np.sin(phi), arc.b * np.cos(phi))


def traveled_length(profile: BetaProfile, t):
    """Arc length covered by amplitude * beta up to time t (closed form).

    The integral of a Beta impulse is a regularized incomplete Beta
    function of the normalized time.
    """
    from scipy.special import betainc

    s = np.clip((np.asarray(t, dtype=float) - profile.t0) / (profile.t1 - profile.t0), 0.0, 1.0)
    return beta_area(profile) * betainc(profile.p + 1, profile.q + 1, s)


def _angle_of_length(arc: EllipticArc, direction: float, lengths, table_size: int = 4096):
    """Parametric angles after traveling given arc lengths from arc_start."""
    sign = 1.0 if direction >= 0 else -1.0
    rel = np.linspace(0.0, 2 * math.pi, table_size)
    r = _ellipse_speed_radius(arc, arc.arc_start + sign * rel)
    lam = np.concatenate([[0.0], np.cumsum((r[1:] + r[:-1]) / 2 * np.diff(rel))])
    circumference = lam[-1]
    lengths = np.asarray(lengths, dtype=float)
    laps = np.floor(lengths / circumference)
    rest = lengths - laps * circumference
    offs = np.interp(rest, lam, rel)
    return arc.arc_start + sign * (offs + laps * 2 * math.pi)


def synthesize_trace(
    strokes: list[SynthStroke],
    sample_hz: float,
    start_xy: tuple[float, float] = (0.0, 0.0),
) -> InkTrace:
    """Trace the superposition of Beta-elliptic strokes on a uniform grid.

    Each active stroke advances along its own elliptic arc by exactly the
    arc length its Beta impulse has accumulated; displacement vectors of
    simultaneously active strokes add.  Consecutive strokes therefore join
    continuously (the next arc picks up wherever the pen is).  The pen
    stays down except across ``lift_after`` gaps.
    """
    if sample_hz <= 0:
        raise ValueError("sample_hz must be positive")
    if not strokes:
        raise ValueError("need at least one stroke")
    order = sorted(range(len(strokes)), key=lambda i: strokes[i].beta.t0)
    t_begin = min(s.beta.t0 for s in strokes)
    t_end = max(s.beta.t1 for s in strokes)
    n_seg = max(1, round((t_end - t_begin) * sample_hz))
    grid = np.linspace(t_begin, t_end, n_seg + 1)

    phis = np.empty((len(strokes), len(grid)))
    for k, s in enumerate(strokes):
        phis[k] = _angle_of_length(s.arc, s.direction, traveled_length(s.beta, grid))

    x = np.full(len(grid), start_xy[0])
    y = np.full(len(grid), start_xy[1])
    for k, s in enumerate(strokes):
        ex, ey = _ellipse_point(s.arc, phis[k])
        x += ex - ex[0]
        y += ey - ey[0]

    # pen-up gaps: samples strictly inside a lift gap go pen-up; the pen
    # position jumps once the ending stroke is over
    pen = np.ones(len(grid), dtype=int)
    jumps_x = np.zeros(len(grid))
    jumps_y = np.zeros(len(grid))
    for idx, k in enumerate(order):
        s = strokes[k]
        if not s.lift_after or idx + 1 >= len(order):
            continue
        t_next = strokes[order[idx + 1]].beta.t0
        eps = 0.25 / sample_hz
        pen[(grid > s.beta.t1 + eps) & (grid < t_next - eps)] = 0
        after = grid > s.beta.t1 + eps
        jumps_x[after] += s.jump_after[0]
        jumps_y[after] += s.jump_after[1]
    x += jumps_x
    y += jumps_y

    points = [
        InkPoint(float(xi), float(yi), float(ti), int(pi))
        for xi, yi, ti, pi in zip(x, y, grid, pen)
    ]
    return InkTrace(tuple(points))
