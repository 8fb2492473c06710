"""Experiment orchestration: feature pipelines, training runs, evaluation.

Four feature pipelines feed the classifier:

    raw              per-point (x, y, pen), scale-normalized, no cleanup
    theta_epc        raw points + the containing stroke's deviation angle
                     and EPC memberships (from the preprocessed chain)
    perceptual       per-stroke EPC memberships (4 dims)
    perceptual_beta  memberships + the ten stroke parameters (14 dims)

``raw`` deliberately skips preprocessing so the comparison isolates what
the Beta-elliptic chain contributes, noise robustness included.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .augment import AugmentConfig, expand_corpus
from .corpus import NoiseSpec, add_noise
from .ink import InkTrace
from .perceptual import FuzzyRegions, encode_sequence, epc_membership
from .preprocess import PreprocessConfig, normalize, preprocess
from .segmentation import SegmentOptions, segment
from .seqnet import NetConfig, SeqNet, TrainConfig, train
from .seqnet.model_io import ModelBundle

__all__ = ["PIPELINES", "EvalReport", "trace_features", "run_experiment", "evaluate_bundle"]

PIPELINES = ("raw", "theta_epc", "perceptual", "perceptual_beta")

PIPELINE_DIMS = {"raw": 3, "theta_epc": 8, "perceptual": 4, "perceptual_beta": 14}

RAW_MAX_LEN = 60


def _raw_points(trace: InkTrace, pp: PreprocessConfig):
    flat = normalize(trace, pp)  # scale/position invariance only, no cleanup
    x, y, t, pen = flat.arrays()
    if len(x) > RAW_MAX_LEN:
        idx = np.linspace(0, len(x) - 1, RAW_MAX_LEN).round().astype(int)
        x, y, t, pen = x[idx], y[idx], t[idx], pen[idx]
    return x, y, t, pen


def trace_features(
    trace: InkTrace,
    pipeline: str,
    pp: PreprocessConfig | None = None,
    opts: SegmentOptions | None = None,
    regions: FuzzyRegions | None = None,
):
    """Feature matrix (T x dim) for one trace under the given pipeline."""
    if pipeline not in PIPELINES:
        raise ValueError(f"unknown pipeline {pipeline!r}; pick one of {PIPELINES}")
    pp = pp or PreprocessConfig()
    if pipeline == "raw":
        x, y, _, pen = _raw_points(trace, pp)
        return np.column_stack([x, y, pen])

    clean = preprocess(trace, pp)
    strokes = segment(clean, opts)
    if pipeline in ("perceptual", "perceptual_beta"):
        if not strokes:
            return np.zeros((1, PIPELINE_DIMS[pipeline]))
        seq = encode_sequence(strokes, regions, with_beta=pipeline == "perceptual_beta")
        rows = []
        for item in seq.items:
            row = list(item.membership.mu)
            if pipeline == "perceptual_beta":
                row.extend(item.beta_features)
            rows.append(row)
        return np.asarray(rows, dtype=float)

    # theta_epc: raw points annotated with the stroke each sits in by time
    x, y, t, pen = _raw_points(trace, pp)
    theta = np.zeros(len(x))
    mus = np.zeros((len(x), 4))
    regions = regions or FuzzyRegions()
    for s in strokes:
        inside = (t >= s.beta.t0) & (t <= s.beta.t1)
        theta[inside] = s.chord_angle
        if s.degenerate:
            mus[inside] = 0.25
        else:
            mus[inside] = epc_membership(s.chord_angle, regions).as_array()
    return np.column_stack([x, y, pen, theta, mus])


@dataclass(frozen=True)
class EvalReport:
    """Evaluation result; the confusion matrix rows are true classes."""

    recognition_rate: float
    confusion: tuple[tuple[int, ...], ...]
    per_class: dict[str, float]
    classes: tuple[str, ...]
    config: dict
    seed: int

    def __post_init__(self):
        total = sum(sum(row) for row in self.confusion)
        diag = sum(self.confusion[i][i] for i in range(len(self.confusion)))
        if total and diag / total != self.recognition_rate:
            raise ValueError("recognition_rate must equal confusion trace / total")

    def to_json(self) -> bytes:
        doc = {
            "recognition_rate": self.recognition_rate,
            "classes": list(self.classes),
            "per_class": self.per_class,
            "confusion": [list(r) for r in self.confusion],
            "config": self.config,
            "seed": self.seed,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()

    @classmethod
    def from_json(cls, data: bytes) -> "EvalReport":
        doc = json.loads(data)
        return cls(
            recognition_rate=doc["recognition_rate"],
            confusion=tuple(tuple(r) for r in doc["confusion"]),
            per_class=doc["per_class"],
            classes=tuple(doc["classes"]),
            config=doc["config"],
            seed=doc["seed"],
        )


def _standardize_fit(features):
    stacked = np.concatenate(features, axis=0)
    mean = stacked.mean(axis=0)
    std = stacked.std(axis=0)
    std[std < 1e-6] = 1.0
    return mean, std


def _standardize_apply(x, mean, std):
    return np.clip((x - mean) / std, -5.0, 5.0)


def run_experiment(
    pipeline: str,
    train_cfg: TrainConfig,
    corpus: list[InkTrace],
    split: float = 0.8,
    seed: int = 0,
    hidden_sizes: tuple[int, ...] = (64,),
    dropout_p: float = 0.2,
    use_ctc: bool = False,
    augment_cfg: AugmentConfig | None = None,
    augment_multiplier: int = 1,
    noise: NoiseSpec | None = None,
    pp: PreprocessConfig | None = None,
    return_bundle: bool = False,
):
    """Split, optionally augment/corrupt, train, evaluate; all per seed.

    The split is a seeded shuffle cut at ``split``; augmentation touches
    only the training side; noise follows its ``apply_to`` field.
    """
    if not 0 < split < 1:
        raise ValueError("split must be in (0, 1)")
    classes = sorted({t.label for t in corpus if t.label is not None})
    if not classes:
        raise ValueError("corpus has no labeled traces")
    index = {name: i for i, name in enumerate(classes)}

    # stratified seeded shuffle: every class splits at the same fraction
    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for name in classes:
        mine = [i for i, t in enumerate(corpus) if t.label == name]
        mine = [mine[j] for j in rng.permutation(len(mine))]
        cut = int(round(split * len(mine)))
        train_idx.extend(mine[:cut])
        test_idx.extend(mine[cut:])
    train_traces = [corpus[i] for i in sorted(train_idx)]
    test_traces = [corpus[i] for i in sorted(test_idx)]
    missing = set(classes) - {t.label for t in train_traces}
    if missing:
        raise ValueError(f"classes missing from the train split: {sorted(missing)}")

    if noise is not None and noise.apply_to in ("train", "both"):
        train_traces = add_noise(train_traces, noise, seed=seed + 1)
    if noise is not None and noise.apply_to in ("test", "both"):
        test_traces = add_noise(test_traces, noise, seed=seed + 2)
    if augment_multiplier > 1:
        train_traces = expand_corpus(
            train_traces, augment_cfg or AugmentConfig(seed=seed), augment_multiplier
        )

    feats_train = [trace_features(t, pipeline, pp) for t in train_traces]
    feats_test = [trace_features(t, pipeline, pp) for t in test_traces]
    mean, std = _standardize_fit(feats_train)
    feats_train = [_standardize_apply(f, mean, std) for f in feats_train]
    feats_test = [_standardize_apply(f, mean, std) for f in feats_test]

    net_cfg = NetConfig(
        input_dim=PIPELINE_DIMS[pipeline],
        num_classes=len(classes),
        hidden_sizes=tuple(hidden_sizes),
        use_ctc=use_ctc,
        dropout_p=dropout_p,
        seed=train_cfg.seed,
    )
    net = SeqNet(net_cfg)
    labeled = [
        (f, [index[t.label]] if use_ctc else index[t.label])
        for f, t in zip(feats_train, train_traces)
    ]
    net, log = train(net, labeled, train_cfg)

    confusion = np.zeros((len(classes), len(classes)), dtype=int)
    for f, t in zip(feats_test, test_traces):
        got, _ = net.predict(f)
        if use_ctc:
            got = got[0] if got else -1
        true = index[t.label]
        if 0 <= got < len(classes):
            confusion[true, got] += 1
        else:  # empty CTC decode: a deterministic miss
            confusion[true, (true + 1) % len(classes)] += 1
    total = confusion.sum()
    rate = float(confusion.trace() / total) if total else 0.0
    per_class = {}
    for name, i in index.items():
        row = confusion[i].sum()
        per_class[name] = float(confusion[i, i] / row) if row else 0.0

    report = EvalReport(
        recognition_rate=rate,
        confusion=tuple(tuple(int(v) for v in row) for row in confusion),
        per_class=per_class,
        classes=tuple(classes),
        config={
            "pipeline": pipeline,
            "split": split,
            "hidden_sizes": list(hidden_sizes),
            "dropout_p": dropout_p,
            "use_ctc": use_ctc,
            "augment_multiplier": augment_multiplier,
            "noise": None if noise is None else {
                "kind": noise.kind, "sigma": noise.sigma,
                "tremble_hz": noise.tremble_hz, "apply_to": noise.apply_to,
            },
            "train": {
                "mode": train_cfg.mode, "epochs": train_cfg.epochs,
                "batch_size": train_cfg.batch_size, "learning_rate": train_cfg.learning_rate,
                "grad_clip": train_cfg.grad_clip, "fuzzy_alpha": train_cfg.fuzzy_alpha,
                "fuzzy_tau": train_cfg.fuzzy_tau, "seed": train_cfg.seed,
            },
            "corpus_size": len(corpus),
        },
        seed=seed,
    )
    if return_bundle:
        bundle = ModelBundle(
            net=net,
            classes=list(classes),
            pipeline=pipeline,
            feature_mean=mean,
            feature_std=std,
            seed=seed,
            training_log=log,
        )
        return report, bundle
    return report


def evaluate_bundle(bundle: ModelBundle, corpus: list[InkTrace], pp: PreprocessConfig | None = None) -> EvalReport:
    """Score a saved model on labeled traces."""
    index = {name: i for i, name in enumerate(bundle.classes)}
    n = len(bundle.classes)
    confusion = np.zeros((n, n), dtype=int)
    for t in corpus:
        if t.label is None or t.label not in index:
            raise ValueError(f"trace label {t.label!r} not among model classes")
        f = _standardize_apply(
            trace_features(t, bundle.pipeline, pp), bundle.feature_mean, bundle.feature_std
        )
        got, _ = bundle.net.predict(f)
        if bundle.net.config.use_ctc:
            got = got[0] if got else (index[t.label] + 1) % n
        confusion[index[t.label], got] += 1
    total = confusion.sum()
    rate = float(confusion.trace() / total) if total else 0.0
    per_class = {
        name: float(confusion[i, i] / confusion[i].sum()) if confusion[i].sum() else 0.0
        for name, i in index.items()
    }
    return EvalReport(
        recognition_rate=rate,
        confusion=tuple(tuple(int(v) for v in row) for row in confusion),
        per_class=per_class,
        classes=tuple(bundle.classes),
        config={"pipeline": bundle.pipeline, "evaluation_only": True},
        seed=bundle.seed,
    )
