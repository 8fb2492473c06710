"""Training regimes for the sequence classifier.

Two ground-truth styles:

* framewise (crisp): every sequence belongs to exactly one class; the
  loss is cross-entropy against the hard label at the final step, or the
  CTC loss over all steps when the net has a CTC head;
* fuzzy ground truth: every sequence belongs to all classes with some
  membership derived from how far its stroke count sits from each class's
  reference stroke count; the loss is cross-entropy against those soft
  targets.

Optimization is plain SGD over shuffled mini-batches with global-norm
gradient clipping, fully deterministic given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ctc import ctc_loss
from .network import SeqNet, log_softmax, softmax

__all__ = ["TrainConfig", "SoftTarget", "fuzzy_targets", "sequence_loss", "train", "grad_check"]


@dataclass(frozen=True)
class TrainConfig:
    mode: str = "framewise"  # framewise | fuzzy
    epochs: int = 30
    batch_size: int = 16
    learning_rate: float = 0.5
    grad_clip: float = 5.0
    fuzzy_alpha: float = 0.5
    fuzzy_tau: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("framewise", "fuzzy"):
            raise ValueError(f"unknown training mode {self.mode!r}")
        if not 0 <= self.fuzzy_alpha <= 1:
            raise ValueError("fuzzy_alpha must be in [0, 1]")
        if self.fuzzy_tau <= 0:
            raise ValueError("fuzzy_tau must be positive")


@dataclass(frozen=True)
class SoftTarget:
    """A proper distribution over classes whose argmax is the true class."""

    dist: tuple[float, ...]
    true_class: int

    def __post_init__(self):
        d = np.asarray(self.dist)
        if abs(d.sum() - 1.0) > 1e-9 or (d < 0).any():
            raise ValueError("soft target must be a distribution")
        if int(d.argmax()) != self.true_class:
            raise ValueError("soft target argmax must be the true class")

    def as_array(self):
        return np.asarray(self.dist, dtype=float)


def fuzzy_targets_from_lengths(lengths, labels, num_classes, alpha=0.5, tau=1.0):
    """Soft targets from per-sample stroke counts (Euclidean length distances).

    The per-class reference length is the median stroke count of its
    training samples; the fuzzy share is softmax(-|l_i - l_ref| / tau)
    blended with the hard label at weight ``alpha``.  Alpha rises per
    sample if the true class would otherwise lose the argmax.
    """
    lengths = np.asarray(lengths, dtype=float)
    labels = np.asarray(labels, dtype=int)
    refs = np.empty(num_classes)
    for c in range(num_classes):
        mine = lengths[labels == c]
        if len(mine) == 0:
            raise ValueError(f"class {c} has no training samples")
        refs[c] = np.median(mine)
    targets = []
    for l_i, y in zip(lengths, labels):
        d = np.abs(l_i - refs)
        fuzzy = softmax(-d / tau)
        a = alpha
        others = np.delete(fuzzy, y)
        if len(others):
            f_max = float(others.max())
            # smallest alpha keeping the true class on top of the blend
            needed = (f_max - fuzzy[y]) / (1.0 + f_max - fuzzy[y])
            a = max(a, needed + 1e-9)
        dist = a * np.eye(num_classes)[y] + (1.0 - a) * fuzzy
        dist = dist / dist.sum()
        targets.append(SoftTarget(tuple(float(v) for v in dist), int(y)))
    return targets


def fuzzy_targets(sequences, class_names, alpha=0.5, tau=1.0):
    """Soft targets for labeled perceptual sequences (one per sample)."""
    index = {name: i for i, name in enumerate(class_names)}
    lengths, labels = [], []
    for seq in sequences:
        if seq.label is None or seq.label not in index:
            raise ValueError(f"sequence label {seq.label!r} not in class list")
        lengths.append(len(seq))
        labels.append(index[seq.label])
    return fuzzy_targets_from_lengths(lengths, labels, len(class_names), alpha, tau)


# ---------------------------------------------------------------------------
# losses


def sequence_loss(net: SeqNet, x, target, training=False, rng=None, dropout_masks=None):
    """Loss plus parameter gradients for one sequence.

    ``target`` is an int class index (cross-entropy at the final step), a
    SoftTarget (same position, soft distribution), or a list/tuple label
    sequence for CTC nets.
    """
    probs, cache = net.forward(x, training=training, rng=rng, dropout_masks=dropout_masks)
    logits = cache["logits"]
    T, O = logits.shape
    dlogits = np.zeros_like(logits)
    if net.config.use_ctc:
        if not isinstance(target, (list, tuple, np.ndarray)):
            target = [int(target)]
        loss, dlogits = ctc_loss(log_softmax(logits), target)
    else:
        if isinstance(target, SoftTarget):
            dist = target.as_array()
        else:
            dist = np.zeros(O)
            dist[int(target)] = 1.0
        lsm = log_softmax(logits[-1])
        loss = float(-(dist * lsm).sum())
        dlogits[-1] = probs[-1] - dist
    grads = net.backward(cache, dlogits)
    return loss, grads, probs


def _clip_global(grads, max_norm):
    total = math.sqrt(sum(float((g * g).sum()) for g in grads.values()))
    if max_norm > 0 and total > max_norm:
        scale = max_norm / total
        for g in grads.values():
            g *= scale
    return total


def train(net: SeqNet, corpus, cfg: TrainConfig):
    """Mini-batch SGD; returns (net, per-epoch metrics).

    ``corpus`` is a list of (sequence, target) pairs; targets as accepted
    by :func:`sequence_loss`.  The net is updated in place and returned.
    Loss turning NaN aborts with a diagnostic.
    """
    if not corpus:
        raise ValueError("empty corpus")
    if cfg.mode == "fuzzy":
        if net.config.use_ctc:
            raise ValueError("fuzzy ground truth applies to the classification head, not CTC")
        lengths = [len(x) for x, _ in corpus]
        labels = [int(t) for _, t in corpus]
        soft = fuzzy_targets_from_lengths(
            lengths, labels, net.config.num_classes, cfg.fuzzy_alpha, cfg.fuzzy_tau
        )
        corpus = [(x, st) for (x, _), st in zip(corpus, soft)]
    rng = np.random.default_rng(cfg.seed)
    metrics = []
    n = len(corpus)
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        correct = 0
        for start in range(0, n, cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            acc = {k: np.zeros_like(v) for k, v in net.params.items()}
            for idx in batch:
                x, target = corpus[idx]
                loss, grads, probs = sequence_loss(net, x, target, training=True, rng=rng)
                if math.isnan(loss):
                    raise RuntimeError(
                        f"training diverged (NaN loss) at epoch {epoch}, sample {idx}"
                    )
                epoch_loss += loss
                for k in acc:
                    acc[k] += grads[k]
                if net.config.use_ctc:
                    from .ctc import ctc_decode

                    want = list(target) if isinstance(target, (list, tuple, np.ndarray)) else [int(target)]
                    correct += int(ctc_decode(probs) == [int(s) for s in want])
                else:
                    want = target.true_class if isinstance(target, SoftTarget) else int(target)
                    correct += int(np.argmax(probs[-1]) == want)
            for k in acc:
                acc[k] /= len(batch)
            _clip_global(acc, cfg.grad_clip)
            for k in net.params:
                net.params[k] -= cfg.learning_rate * acc[k]
        metrics.append(
            {"epoch": epoch, "loss": epoch_loss / n, "train_accuracy": correct / n}
        )
    return net, metrics


# ---------------------------------------------------------------------------
# gradient checking


def grad_check(net: SeqNet, x, target, h: float = 1e-5, dropout_masks=None) -> float:
    """Worst relative error of analytic vs. central-difference gradients.

    Meant for small nets (hidden <= 8, T <= 8).  Dropout is exercised by
    passing explicit masks; otherwise the check runs in eval mode.
    """
    training = dropout_masks is not None
    base_loss, grads, _ = sequence_loss(net, x, target, training=training, dropout_masks=dropout_masks)

    def loss_at():
        loss, _, _ = sequence_loss(net, x, target, training=training, dropout_masks=dropout_masks)
        return loss

    floor = 1e-6 * max(1.0, abs(base_loss))
    worst = 0.0
    for key, p in net.params.items():
        flat = p.reshape(-1)
        gflat = grads[key].reshape(-1)
        for j in range(flat.size):
            keep = flat[j]
            flat[j] = keep + h
            up = loss_at()
            flat[j] = keep - h
            down = loss_at()
            flat[j] = keep
            numeric = (up - down) / (2 * h)
            # symmetric relative error; the loss-scaled floor keeps
            # finite-difference round-off (eps * |loss| / h absolute)
            # from dominating tiny gradients
            denom = max(abs(numeric) + abs(gflat[j]), floor)
            worst = max(worst, abs(numeric - gflat[j]) / denom)
    return worst
