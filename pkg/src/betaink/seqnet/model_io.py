"""Portable model container.

A model file is a JSON object with a fixed field order:

    format_version   int, currently 1
    net_config       NetConfig fields
    classes          class names, output order
    pipeline         feature pipeline name (raw | theta_epc | perceptual |
                     perceptual_beta), or null for bare nets
    feature_mean     per-dimension standardization mean (list), or null
    feature_std      per-dimension standardization scale (list), or null
    seed             training seed
    training_log     per-epoch metric dicts
    params           name -> nested float lists, insertion order:
                     W0, U0, b0, ..., V, c

Parameter arrays are written as plain JSON lists so files stay portable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .network import NetConfig, SeqNet

__all__ = ["ModelBundle", "save_model", "load_model"]

FORMAT_VERSION = 1


@dataclass
class ModelBundle:
    """A trained net plus everything needed to run its feature pipeline."""

    net: SeqNet
    classes: list[str]
    pipeline: str | None = None
    feature_mean: np.ndarray | None = None
    feature_std: np.ndarray | None = None
    seed: int = 0
    training_log: list = field(default_factory=list)

    def standardize(self, x):
        if self.feature_mean is None:
            return x
        return (x - self.feature_mean) / self.feature_std


def save_model(bundle: ModelBundle, path) -> None:
    cfg = bundle.net.config
    doc = {
        "format_version": FORMAT_VERSION,
        "net_config": {
            "input_dim": cfg.input_dim,
            "num_classes": cfg.num_classes,
            "hidden_sizes": list(cfg.hidden_sizes),
            "use_ctc": cfg.use_ctc,
            "dropout_p": cfg.dropout_p,
            "seed": cfg.seed,
        },
        "classes": list(bundle.classes),
        "pipeline": bundle.pipeline,
        "feature_mean": None if bundle.feature_mean is None else bundle.feature_mean.tolist(),
        "feature_std": None if bundle.feature_std is None else bundle.feature_std.tolist(),
        "seed": bundle.seed,
        "training_log": bundle.training_log,
        "params": {k: v.tolist() for k, v in bundle.net.params.items()},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_model(path) -> ModelBundle:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format {doc.get('format_version')!r}")
    nc = doc["net_config"]
    config = NetConfig(
        input_dim=nc["input_dim"],
        num_classes=nc["num_classes"],
        hidden_sizes=tuple(nc["hidden_sizes"]),
        use_ctc=nc["use_ctc"],
        dropout_p=nc["dropout_p"],
        seed=nc["seed"],
    )
    params = {k: np.asarray(v, dtype=float) for k, v in doc["params"].items()}
    net = SeqNet(config, params)
    mean = doc.get("feature_mean")
    std = doc.get("feature_std")
    return ModelBundle(
        net=net,
        classes=list(doc["classes"]),
        pipeline=doc.get("pipeline"),
        feature_mean=None if mean is None else np.asarray(mean),
        feature_std=None if std is None else np.asarray(std),
        seed=doc.get("seed", 0),
        training_log=doc.get("training_log", []),
    )
