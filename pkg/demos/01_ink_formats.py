"""Ink data model and the two file formats.

A trace is a list of (x, y, t, pen) samples plus a label and free-form
metadata.  Both serializations round-trip exactly.
"""

import numpy as np

from betaink import InkTrace, parse_ink, serialize_ink, split_pen_strokes

# a little two-stroke figure: a bar, a pen lift, then a slash
t = np.linspace(0.0, 0.5, 26)
bar = [(x, 0.0, tt, 1) for x, tt in zip(np.linspace(0, 1, 26), t)]
lift = [(1.0, 0.0, 0.52, 0)]
slash = [(x, x, tt, 1) for x, tt in zip(np.linspace(0, 1, 26), t + 0.55)]

trace = InkTrace.from_arrays(
    *zip(*[(p[0], p[1], p[2], p[3]) for p in bar + lift + slash]),
    label="7-ish",
    meta={"writer": "demo"},
)

print("points:", len(trace), "strokes:", len(split_pen_strokes(trace)))

text = serialize_ink([trace], "text")
print("\n--- text format (first lines) ---")
print(b"\n".join(text.split(b"\n")[:6]).decode())

json_bytes = serialize_ink([trace], "json")
print("\n--- json format (first 120 bytes) ---")
print(json_bytes[:120].decode(), "...")

assert parse_ink(text, "text") == [trace]
assert parse_ink(json_bytes, "json") == [trace]
print("\nround trips: exact for both formats")
