"""Render one sample of every synthetic class.  Writes demos/out/gallery.png."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from betaink.corpus import default_digit_specs, default_letter_specs, render_sample

specs = default_digit_specs() + default_letter_specs()
fig, axes = plt.subplots(3, 6, figsize=(12, 6))
for ax, spec in zip(axes.ravel(), specs):
    trace = render_sample(spec, np.random.default_rng(7))
    x, y, _, pen = trace.arrays()
    runs = np.split(np.arange(len(x)), np.flatnonzero(np.diff(pen != 0)) + 1)
    for run in runs:
        if len(run) and pen[run[0]] == 1:
            ax.plot(x[run], y[run], "k-", lw=1.2)
    ax.set_title(f"{spec.name} ({spec.stroke_count()} strokes)", fontsize=8)
    ax.set_aspect("equal")
    ax.axis("off")
for ax in axes.ravel()[len(specs):]:
    ax.axis("off")

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
fig.savefig(out / "gallery.png", dpi=120, bbox_inches="tight")
print("wrote", out / "gallery.png")
for spec in specs:
    print(f"{spec.name:3s} -> {[b.value for b in spec.expected_bpcs()]}")
