"""Fuzzy EPC memberships and BPC composition.

Plots the four membership functions over the folded angle range and runs
a hand-built "u then bar" figure through encode + compose.  Writes
demos/out/memberships.png.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from betaink import compose_bpc, encode_sequence, epc_membership, handwriting_equation, segment, synthesize_trace
from betaink.corpus import TemplatePrimitive, SyntheticClassSpec, render_sample
from betaink.perceptual import Bpc, Epc

angles = np.linspace(-math.pi / 2 + 1e-6, math.pi / 2, 800)
mus = np.array([epc_membership(a).as_array() for a in angles])

fig, ax = plt.subplots(figsize=(8, 3))
for epc in Epc:
    ax.plot(np.degrees(angles), mus[:, epc.value], label=epc.name.title().replace("_", ""))
ax.set_xlabel("chord deviation angle (degrees)")
ax.set_ylabel("membership")
ax.legend(ncol=4, fontsize=8)
out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
fig.savefig(out / "memberships.png", dpi=120, bbox_inches="tight")
print("wrote", out / "memberships.png")

# a u-shape followed by a bar: DownHalfOcclusion + Valley
spec = SyntheticClassSpec(
    "demo", (TemplatePrimitive(Bpc.DOWN_HALF_OCCLUSION), TemplatePrimitive(Bpc.VALLEY))
)
trace = render_sample(spec, np.random.default_rng(1))
strokes = segment(trace)
seq = encode_sequence(strokes)
spans = compose_bpc(seq.dominant_epcs())
print("dominant EPCs:", [e.abbrev for e in seq.dominant_epcs()])
print("BPC spans:", [(s.bpc.value, s.start, s.stop) for s in spans])
print(handwriting_equation(seq, spans))
