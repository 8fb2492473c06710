"""Segment a trajectory into Beta-elliptic strokes and inspect the fits.

The trace comes from the generative model itself, so the recovered
parameters can be compared against ground truth.  Writes
demos/out/segmentation.png.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from betaink import beta, curvilinear_velocity, segment, synthesize_trace
from betaink.beta import BetaProfile, SynthStroke, amplitude_for_arc_length
from betaink.fitting import EllipticArc

# three strokes: two arcs and a line, joined continuously
chain = []
specs = [
    (0.0, 0.55, 2.2, 1.8, EllipticArc(0, 0, 0.6, 0.45, 0.3, arc_start=2.2), 1, 1.4),
    (0.55, 1.1, 2.0, 2.4, EllipticArc(0, 0, 0.5, 0.5, 0.0, arc_start=0.6), -1, 1.2),
    (1.1, 1.6, 2.8, 2.0, EllipticArc(0, 0, 0.45, 1e-6, -0.6, arc_start=np.pi), 1, 0.8),
]
for t0, t1, p, q, arc, direction, sweep in specs:
    prof = BetaProfile(t0, t1, p, q, 1.0)
    phi = np.linspace(0, sweep, 512)
    r = np.hypot(arc.a * np.sin(arc.arc_start + direction * phi), arc.b * np.cos(arc.arc_start + direction * phi))
    length = float(np.trapezoid(r, phi))
    chain.append(SynthStroke(BetaProfile(t0, t1, p, q, amplitude_for_arc_length(prof, length)), arc, direction))

trace = synthesize_trace(chain, 200.0)
strokes = segment(trace)
print(f"true strokes: {len(chain)}, segmented: {len(strokes)}\n")
for i, (true, got) in enumerate(zip(chain, strokes)):
    print(f"stroke {i}: p {true.beta.p:.2f}->{got.beta.p:.2f}  q {true.beta.q:.2f}->{got.beta.q:.2f}  "
          f"amp {true.beta.amplitude:.2f}->{got.beta.amplitude:.2f}  theta {got.arc.theta:+.2f}")

t, v = curvilinear_velocity(trace)
fig, axes = plt.subplots(1, 2, figsize=(10, 3.4))
x, y, _, _ = trace.arrays()
axes[0].plot(x, y, "k-", lw=1)
for s in strokes:
    bp = s.points
    axes[0].plot([bp.m1.x, bp.m3.x], [bp.m1.y, bp.m3.y], "o", ms=4)
    axes[0].plot(bp.m2.x, bp.m2.y, "r^", ms=5)
    axes[0].plot(bp.h.x, bp.h.y, "gx", ms=5)
axes[0].set_title("trajectory, M1/M3 (dots), M2 (triangle), H (cross)")
axes[0].set_aspect("equal")

axes[1].plot(t, v, "k-", lw=1, label="measured speed")
for s in strokes:
    tt = np.linspace(s.beta.t0, s.beta.t1, 200)
    axes[1].plot(tt, s.beta.amplitude * beta(tt, s.beta), "--", lw=1)
axes[1].set_title("curvilinear velocity and fitted Beta impulses")
axes[1].legend()

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
fig.savefig(out / "segmentation.png", dpi=120, bbox_inches="tight")
print("\nwrote", out / "segmentation.png")
