"""Nonlinear/algebraic fitting of stroke models: Beta impulses and elliptic arcs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["EllipticArc", "fold_angle", "deviation_angle", "fit_beta", "fit_arc"]

DEGENERATE_B = 1e-9


@dataclass(frozen=True)
class EllipticArc:
    """An elliptic arc: center, semi-axes (b <= a), axis tilt and sweep.

    ``theta`` is the deviation of the major axis from the horizontal,
    folded into (-pi/2, pi/2].  ``arc_start``/``arc_end`` are parametric
    angles delimiting the traced portion.  ``degenerate`` marks chord-only
    fallbacks where no ellipse was identifiable.
    """

    x0: float
    y0: float
    a: float
    b: float
    theta: float
    arc_start: float = 0.0
    arc_end: float = 2 * math.pi
    degenerate: bool = False

    def __post_init__(self):
        if not 0 < self.b <= self.a:
            raise ValueError(f"need 0 < b <= a, got a={self.a}, b={self.b}")


def fold_angle(angle: float) -> float:
    """Fold any angle into (-pi/2, pi/2] (directions modulo a half turn)."""
    a = math.remainder(angle, math.pi)
    if a <= -math.pi / 2:
        a += math.pi
    elif a > math.pi / 2:
        a -= math.pi
    return a


def deviation_angle(x0: float, y0: float, x1: float, y1: float) -> float:
    """Angle of the direction (x0,y0)->(x1,y1) vs. the horizontal, folded."""
    if x0 == x1 and y0 == y1:
        raise ValueError("deviation angle of coincident points is undefined")
    return fold_angle(math.atan2(y1 - y0, x1 - x0))


# ---------------------------------------------------------------------------
# Beta profile fitting


def fit_beta(t, v, t0: float, t1: float, max_iter: int = 100, grad_tol: float = 1e-10):
    """Fit amplitude * beta(t; p, q, t0, t1) to velocity samples.

    Levenberg-Marquardt on (p, q, amplitude) with analytic Jacobian,
    started from p = q = 2, amplitude = max(v).  Support endpoints are
    fixed.  Returns the best iterate as a BetaProfile.
    """
    from .beta import BetaProfile, beta  # local import to avoid a cycle

    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    inside = (t > t0) & (t < t1)
    t, v = t[inside], v[inside]
    if len(t) < 5:
        raise ValueError(f"need >= 5 samples inside ({t0}, {t1}), got {len(t)}")
    vmax = float(v.max())
    if vmax <= 0:
        raise ValueError("all-zero velocity; degenerate stroke")

    p, q, amp = 2.0, 2.0, vmax
    lam = 1e-3

    def model(p_, q_, a_):
        prof = BetaProfile(t0, t1, p_, q_, 1.0)
        b = beta(t, prof)
        tc = prof.tc
        log_u = np.log((t - t0) / (tc - t0))
        log_w = np.log((t1 - t) / (t1 - tc))
        r = a_ * b - v
        J = np.column_stack([a_ * b * log_u, a_ * b * log_w, b])
        return r, J

    r, J = model(p, q, amp)
    sse = float(r @ r)
    best = (sse, p, q, amp)
    for _ in range(max_iter):
        g = J.T @ r
        if np.max(np.abs(g)) < grad_tol:
            break
        JtJ = J.T @ J
        stepped = False
        for _ in range(20):
            A = JtJ + lam * np.diag(np.diag(JtJ))
            try:
                delta = np.linalg.solve(A, -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            p_n, q_n, a_n = p + delta[0], q + delta[1], amp + delta[2]
            if p_n <= 1e-3 or q_n <= 1e-3 or a_n <= 0:
                lam *= 10
                continue
            r_n, J_n = model(p_n, q_n, a_n)
            sse_n = float(r_n @ r_n)
            if sse_n < sse:
                p, q, amp, r, J, sse = p_n, q_n, a_n, r_n, J_n, sse_n
                lam = max(lam / 10, 1e-12)
                stepped = True
                break
            lam *= 10
        if not stepped:
            break
        if sse < best[0]:
            best = (sse, p, q, amp)
    if sse < best[0]:
        best = (sse, p, q, amp)
    _, p, q, amp = best
    return BetaProfile(t0, t1, p, q, amp)


# ---------------------------------------------------------------------------
# ellipse fitting (direct least squares on the conic, ellipse-constrained)


def _fit_conic(x, y):
    """Stable direct ellipse fit; returns conic [a,b,c,d,e,f] or None."""
    D1 = np.column_stack([x * x, x * y, y * y])
    D2 = np.column_stack([x, y, np.ones_like(x)])
    S1 = D1.T @ D1
    S2 = D1.T @ D2
    S3 = D2.T @ D2
    try:
        T = -np.linalg.solve(S3, S2.T)
    except np.linalg.LinAlgError:
        return None
    M = S1 + S2 @ T
    # inverse of the ellipse constraint matrix applied by row shuffling
    M = np.array([M[2] / 2, -M[1], M[0] / 2])
    try:
        eigval, eigvec = np.linalg.eig(M)
    except np.linalg.LinAlgError:
        return None
    cond = np.real(4 * eigvec[0] * eigvec[2] - eigvec[1] ** 2)
    ok = np.flatnonzero(np.isreal(eigval) & (cond > 0))
    if len(ok) == 0:
        return None
    a1 = np.real(eigvec[:, ok[0]])
    return np.concatenate([a1, T @ a1])


def _conic_to_arc(conic):
    """Convert ax^2+bxy+cy^2+dx+ey+f=0 to center/axes/tilt, or None."""
    a, b, c, d, e, f = conic
    Q = np.array([[a, b / 2], [b / 2, c]])
    try:
        cx, cy = np.linalg.solve(2 * Q, [-d, -e])
    except np.linalg.LinAlgError:
        return None
    F0 = a * cx * cx + b * cx * cy + c * cy * cy + d * cx + e * cy + f
    eigval, eigvec = np.linalg.eigh(Q)
    if eigval.max() < 0:  # sign convention: make the form positive definite
        eigval, F0 = -eigval, -F0
    if F0 >= 0 or np.any(eigval <= 0):
        return None
    axes = np.sqrt(-F0 / eigval)
    major = int(np.argmax(axes))
    theta = fold_angle(math.atan2(eigvec[1, major], eigvec[0, major]))
    return float(cx), float(cy), float(axes[major]), float(axes[1 - major]), theta


def _param_angle(x, y, cx, cy, a, b, theta):
    ct, st = math.cos(theta), math.sin(theta)
    dx, dy = x - cx, y - cy
    u = dx * ct + dy * st
    w = -dx * st + dy * ct
    return math.atan2(w / b, u / a)


def _circle_through(p1, p2, p3):
    """Circumcircle of three points, or None when collinear."""
    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    d = 2 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2))
    if abs(d) < 1e-12:
        return None
    s1 = x1 * x1 + y1 * y1
    s2 = x2 * x2 + y2 * y2
    s3 = x3 * x3 + y3 * y3
    cx = (s1 * (y2 - y3) + s2 * (y3 - y1) + s3 * (y1 - y2)) / d
    cy = (s1 * (x3 - x2) + s2 * (x1 - x3) + s3 * (x2 - x1)) / d
    r = math.hypot(x1 - cx, y1 - cy)
    return cx, cy, r


def _chord_arc(bp) -> EllipticArc:
    half = math.hypot(bp.m3.x - bp.m1.x, bp.m3.y - bp.m1.y) / 2
    if half > 0:
        theta = deviation_angle(bp.m1.x, bp.m1.y, bp.m3.x, bp.m3.y)
    else:
        theta = 0.0
    return EllipticArc(
        x0=(bp.m1.x + bp.m3.x) / 2,
        y0=(bp.m1.y + bp.m3.y) / 2,
        a=max(half, DEGENERATE_B),
        b=DEGENERATE_B,
        theta=theta,
        arc_start=math.pi,
        arc_end=0.0,
        degenerate=True,
    )


def fit_arc(points, bp) -> EllipticArc:
    """Fit an elliptic arc to stroke points.

    Minimizes algebraic distance under the ellipse discriminant
    constraint.  When conditioning fails (near-straight strokes) it falls
    back to the circle spanned by the beta points, and when even those are
    collinear it returns a degenerate chord-only arc.
    """
    pts = np.asarray(points, dtype=float)
    arc = None
    if len(pts) >= 5:
        mx, my = pts[:, 0].mean(), pts[:, 1].mean()  # center for conditioning
        conic = _fit_conic(pts[:, 0] - mx, pts[:, 1] - my)
        if conic is not None:
            geom = _conic_to_arc(conic)
            if geom is not None:
                cx, cy, a, b, theta = geom
                cx, cy = cx + mx, cy + my
                # reject wildly extrapolated ellipses (near-collinear input)
                extent = math.hypot(np.ptp(pts[:, 0]), np.ptp(pts[:, 1]))
                if a <= 50 * max(extent, 1e-12):
                    arc = (cx, cy, a, b, theta)
    if arc is None:
        circle = _circle_through((bp.m1.x, bp.m1.y), (bp.m2.x, bp.m2.y), (bp.m3.x, bp.m3.y))
        if circle is None:
            return _chord_arc(bp)
        cx, cy, r = circle
        chord_theta = deviation_angle(bp.m1.x, bp.m1.y, bp.m3.x, bp.m3.y)
        arc = (cx, cy, r, r, chord_theta)
    cx, cy, a, b, theta = arc
    b = max(b, DEGENERATE_B)
    start = _param_angle(bp.m1.x, bp.m1.y, cx, cy, a, b, theta)
    end = _param_angle(bp.m3.x, bp.m3.y, cx, cy, a, b, theta)
    return EllipticArc(cx, cy, a, b, theta, arc_start=start, arc_end=end)
