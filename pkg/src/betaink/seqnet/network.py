"""LSTM network built on plain numpy.

Everything is explicit: gate math, backpropagation through time, inverted
dropout on the non-recurrent connections, softmax heads.  Training code
lives in :mod:`betaink.seqnet.training`; the CTC loss in
:mod:`betaink.seqnet.ctc`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["NetConfig", "SeqNet", "sigmoid", "softmax", "log_softmax"]


def sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def softmax(logits):
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(logits):
    z = logits - logits.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


@dataclass(frozen=True)
class NetConfig:
    """Shape and behavior of the classifier.

    ``input_dim`` is 4 for EPC memberships, 14 for memberships plus the
    ten stroke parameters, 3 for raw (x, y, pen) points and 8 for raw
    points plus theta and memberships.  With ``use_ctc`` the output grows
    by one blank class.
    """

    input_dim: int
    num_classes: int
    hidden_sizes: tuple[int, ...] = (64,)
    use_ctc: bool = False
    dropout_p: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.num_classes < 2:
            raise ValueError("need at least 2 classes")
        if not 0 <= self.dropout_p < 1:
            raise ValueError("dropout_p must be in [0, 1)")
        if not self.hidden_sizes:
            raise ValueError("need at least one hidden layer")

    @property
    def output_dim(self) -> int:
        return self.num_classes + 1 if self.use_ctc else self.num_classes

    @property
    def blank(self) -> int:
        if not self.use_ctc:
            raise ValueError("no blank class without CTC")
        return self.num_classes


class SeqNet:
    """Stacked LSTM with a per-step softmax head.

    Parameters live in ``self.params``: per layer ``W{l}`` (input
    projection, 4H x D), ``U{l}`` (recurrent, 4H x H), ``b{l}`` (4H, gate
    order input/forget/cell/output), plus the head ``V``/``c``.  The
    forget-gate bias starts at 1.
    """

    INIT_SCALE = 0.1

    def __init__(self, config: NetConfig, params: dict[str, np.ndarray] | None = None):
        self.config = config
        if params is not None:
            self.params = params
            return
        rng = np.random.default_rng(config.seed)
        self.params = {}
        d = config.input_dim
        for l, h in enumerate(config.hidden_sizes):
            self.params[f"W{l}"] = rng.uniform(-self.INIT_SCALE, self.INIT_SCALE, (4 * h, d))
            self.params[f"U{l}"] = rng.uniform(-self.INIT_SCALE, self.INIT_SCALE, (4 * h, h))
            b = np.zeros(4 * h)
            b[h:2 * h] = 1.0  # forget gate open at start
            self.params[f"b{l}"] = b
            d = h
        self.params["V"] = rng.uniform(-self.INIT_SCALE, self.INIT_SCALE, (config.output_dim, d))
        self.params["c"] = np.zeros(config.output_dim)

    @classmethod
    def zeros(cls, config: NetConfig) -> "SeqNet":
        """All-zero parameters; softmax output is exactly uniform."""
        net = cls(config)
        for k in net.params:
            net.params[k] = np.zeros_like(net.params[k])
        return net

    def clone(self) -> "SeqNet":
        return SeqNet(self.config, {k: v.copy() for k, v in self.params.items()})

    # ------------------------------------------------------------------
    # forward

    def draw_dropout_masks(self, T: int, rng) -> list[np.ndarray]:
        """Per-step inverted-dropout masks for each layer's input."""
        p = self.config.dropout_p
        masks = []
        d = self.config.input_dim
        for h in self.config.hidden_sizes:
            if p == 0:
                masks.append(np.ones((T, d)))
            else:
                masks.append((rng.random((T, d)) >= p) / (1.0 - p))
            d = h
        return masks

    def forward(self, x, training: bool = False, rng=None, dropout_masks=None):
        """Run the recurrence; returns (probs T x O, cache).

        Dropout applies only when ``training`` and acts per step on each
        layer's non-recurrent input.  Pass ``dropout_masks`` for a
        deterministic training-mode forward.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.config.input_dim:
            raise ValueError(
                f"expected a T x {self.config.input_dim} sequence, got {x.shape}"
            )
        T = x.shape[0]
        if training and dropout_masks is None:
            if self.config.dropout_p > 0 and rng is None:
                raise ValueError("training-mode forward needs an rng or explicit masks")
            dropout_masks = self.draw_dropout_masks(T, rng) if self.config.dropout_p > 0 else None

        cache = {"layers": [], "masks": dropout_masks, "T": T}
        inp = x
        for l, h in enumerate(self.config.hidden_sizes):
            if training and dropout_masks is not None:
                inp = inp * dropout_masks[l]
            W, U, b = self.params[f"W{l}"], self.params[f"U{l}"], self.params[f"b{l}"]
            zx = inp @ W.T + b
            i_all = np.empty((T, h))
            f_all = np.empty((T, h))
            g_all = np.empty((T, h))
            o_all = np.empty((T, h))
            c_all = np.empty((T, h))
            h_all = np.empty((T, h))
            h_prev = np.zeros(h)
            c_prev = np.zeros(h)
            for t in range(T):
                z = zx[t] + U @ h_prev
                i = sigmoid(z[:h])
                f = sigmoid(z[h:2 * h])
                g = np.tanh(z[2 * h:3 * h])
                o = sigmoid(z[3 * h:])
                c = f * c_prev + i * g
                ht = o * np.tanh(c)
                i_all[t], f_all[t], g_all[t], o_all[t] = i, f, g, o
                c_all[t], h_all[t] = c, ht
                h_prev, c_prev = ht, c
            cache["layers"].append(
                {"inp": inp, "i": i_all, "f": f_all, "g": g_all, "o": o_all, "c": c_all, "h": h_all}
            )
            inp = h_all
        logits = inp @ self.params["V"].T + self.params["c"]
        cache["logits"] = logits
        cache["top_h"] = inp
        return softmax(logits), cache

    # ------------------------------------------------------------------
    # backward

    def backward(self, cache, dlogits):
        """Gradients of a scalar loss given d loss / d logits (T x O)."""
        grads = {k: np.zeros_like(v) for k, v in self.params.items()}
        grads["V"] = dlogits.T @ cache["top_h"]
        grads["c"] = dlogits.sum(axis=0)
        dh_from_above = dlogits @ self.params["V"]

        masks = cache["masks"]
        for l in range(len(self.config.hidden_sizes) - 1, -1, -1):
            lc = cache["layers"][l]
            h = self.config.hidden_sizes[l]
            T = cache["T"]
            U = self.params[f"U{l}"]
            i, f, g, o, c = lc["i"], lc["f"], lc["g"], lc["o"], lc["c"]
            tanh_c = np.tanh(c)
            dZ = np.empty((T, 4 * h))
            dh_next = np.zeros(h)
            dc_next = np.zeros(h)
            for t in range(T - 1, -1, -1):
                dh = dh_from_above[t] + dh_next
                dc = dc_next + dh * o[t] * (1.0 - tanh_c[t] ** 2)
                do = dh * tanh_c[t] * o[t] * (1.0 - o[t])
                c_prev = c[t - 1] if t > 0 else np.zeros(h)
                df = dc * c_prev * f[t] * (1.0 - f[t])
                di = dc * g[t] * i[t] * (1.0 - i[t])
                dg = dc * i[t] * (1.0 - g[t] ** 2)
                dz = np.concatenate([di, df, dg, do])
                dZ[t] = dz
                dh_next = U.T @ dz
                dc_next = dc * f[t]
            grads[f"W{l}"] = dZ.T @ lc["inp"]
            if T > 1:
                grads[f"U{l}"] = dZ[1:].T @ lc["h"][:-1]
            grads[f"b{l}"] = dZ.sum(axis=0)
            dinp = dZ @ self.params[f"W{l}"]
            if masks is not None:
                dinp = dinp * masks[l]
            dh_from_above = dinp
        return grads

    # ------------------------------------------------------------------
    # inference

    def predict(self, x):
        """Classify one sequence.

        Returns (class_index, log_confidence); with CTC, (label_list,
        summed best-path log probability).
        """
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[0] < 1:
            raise ValueError("predict needs a non-empty T x D sequence")
        probs, _ = self.forward(x, training=False)
        if self.config.use_ctc:
            from .ctc import ctc_decode

            labels = ctc_decode(probs)
            path = probs.argmax(axis=1)
            log_conf = float(np.log(probs[np.arange(len(path)), path]).sum())
            return labels, log_conf
        final = probs[-1]
        idx = int(np.argmax(final))
        return idx, float(np.log(final[idx]))
