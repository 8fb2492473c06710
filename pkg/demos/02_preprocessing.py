"""Cleanup pipeline on a deliberately ugly trace.

Irregular sampling, a terminal hook, and 40 Hz tremble go in; a uniform,
hook-free, smooth, height-normalized trace comes out.  Writes
demos/out/preprocessing.png.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from betaink import InkTrace, PreprocessConfig, preprocess

rng = np.random.default_rng(3)

# an S-curve sampled irregularly, with tremble and a hook at the end
t = np.sort(rng.uniform(0, 1.5, 140))
t[0], t[-1] = 0.0, 1.5
x = t + 0.02 * np.sin(2 * np.pi * 40 * t)
y = 0.4 * np.sin(2 * np.pi * t / 1.5) + 0.02 * np.cos(2 * np.pi * 40 * t)
# hook: three points shooting off at ~120 degrees
hx = [x[-1] - 0.01 * k * np.cos(np.radians(60)) for k in (1, 2, 3)]
hy = [y[-1] + 0.01 * k * np.sin(np.radians(60)) for k in (1, 2, 3)]
x = np.concatenate([x, hx])
y = np.concatenate([y, hy])
t = np.concatenate([t, [1.51, 1.52, 1.53]])

raw = InkTrace.from_arrays(x, y, t, np.ones_like(t, dtype=int))
clean = preprocess(raw, PreprocessConfig())

fig, axes = plt.subplots(1, 2, figsize=(9, 3.2))
axes[0].plot(x, y, ".-", lw=0.6, ms=2)
axes[0].set_title(f"raw ({len(raw)} pts, trembling, hooked)")
cx, cy, _, _ = clean.arrays()
axes[1].plot(cx, cy, ".-", lw=0.8, ms=2)
axes[1].set_title(f"preprocessed ({len(clean)} pts)")
for ax in axes:
    ax.set_aspect("equal")

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
fig.savefig(out / "preprocessing.png", dpi=120, bbox_inches="tight")
print("wrote", out / "preprocessing.png")
print("bbox height after normalize:", round(max(cy) - min(cy), 6))
