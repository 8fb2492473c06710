"""Exercise the recognition service in-process and show the payload.

Uses the model written by 06_train_and_recognize.py if present, otherwise
an untrained net (the payload schema is the point here).
"""

import json
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from betaink.corpus import default_digit_specs, render_sample
from betaink.service import create_app

model = Path(__file__).parent / "out" / "digits_model.json"
if model.exists():
    app = create_app(model_path=model)
else:
    from betaink.seqnet import NetConfig, SeqNet
    from betaink.seqnet.model_io import ModelBundle

    bundle = ModelBundle(
        net=SeqNet(NetConfig(input_dim=14, num_classes=10, hidden_sizes=(16,), dropout_p=0.0, seed=0)),
        classes=[f"d{i}" for i in range(10)],
        pipeline="perceptual_beta",
        feature_mean=np.zeros(14),
        feature_std=np.ones(14),
    )
    app = create_app(bundle=bundle)

client = TestClient(app)
print("health:", client.get("/health").json())

trace = render_sample(default_digit_specs()[7], np.random.default_rng(2))
payload = {"points": [{"x": p.x, "y": p.y, "t": p.t, "pen": p.pen} for p in trace.points]}
doc = client.post("/recognize", json=payload).json()

print("label:", doc["label"], " confidence:", round(doc["confidence"], 4))
print("equation:", doc["equation"])
print("bpc:", doc["bpc"])
print("first stroke record:")
print(json.dumps(doc["strokes"][0], indent=2)[:600])
