"""Connectionist temporal classification: alignment-free sequence loss.

The loss sums the probability of every frame labeling that collapses
(merge repeats, drop blanks) to the target label sequence, computed with
the forward-backward recursion in log space.  The gradient comes back
with respect to the pre-softmax activations.  The blank is the last
output class.
"""

from __future__ import annotations

import numpy as np

__all__ = ["CtcLengthError", "ctc_loss", "ctc_decode", "collapse"]

NEG_INF = -np.inf


class CtcLengthError(ValueError):
    """The input is too short to emit the label at all (loss would be infinite)."""


def collapse(path, blank: int):
    """Merge repeating labels, then remove blanks."""
    out = []
    prev = None
    for s in path:
        if s != prev:
            out.append(int(s))
        prev = s
    return [s for s in out if s != blank]


def _logsumexp2(a, b):
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    m = max(a, b)
    return m + np.log(np.exp(a - m) + np.exp(b - m))


def ctc_loss(log_probs, label):
    """CTC negative log likelihood and its gradient.

    ``log_probs`` is a T x (C+1) array of per-step log probabilities (log
    softmax of the logits; blank last).  ``label`` is a sequence over
    classes 0..C-1.  Returns ``(loss, grad)`` with ``grad`` the derivative
    with respect to the pre-softmax activations.
    """
    lp = np.asarray(log_probs, dtype=float)
    T, n_out = lp.shape
    blank = n_out - 1
    label = [int(s) for s in label]
    if any(not 0 <= s < blank for s in label):
        raise ValueError(f"label symbols must lie in [0, {blank})")
    repeats = sum(1 for a, b in zip(label, label[1:]) if a == b)
    if T < len(label) + repeats:
        raise CtcLengthError(
            f"{T} frames cannot emit a length-{len(label)} label with {repeats} repeats"
        )

    ext = [blank]
    for s in label:
        ext.extend([s, blank])
    S = len(ext)

    alpha = np.full((T, S), NEG_INF)
    alpha[0, 0] = lp[0, ext[0]]
    if S > 1:
        alpha[0, 1] = lp[0, ext[1]]
    for t in range(1, T):
        for s in range(S):
            best = alpha[t - 1, s]
            if s >= 1:
                best = _logsumexp2(best, alpha[t - 1, s - 1])
            if s >= 2 and ext[s] != blank and ext[s] != ext[s - 2]:
                best = _logsumexp2(best, alpha[t - 1, s - 2])
            alpha[t, s] = best + lp[t, ext[s]]

    log_p = _logsumexp2(alpha[T - 1, S - 1], alpha[T - 1, S - 2] if S > 1 else NEG_INF)
    loss = -log_p

    beta = np.full((T, S), NEG_INF)
    beta[T - 1, S - 1] = lp[T - 1, ext[S - 1]]
    if S > 1:
        beta[T - 1, S - 2] = lp[T - 1, ext[S - 2]]
    for t in range(T - 2, -1, -1):
        for s in range(S - 1, -1, -1):
            best = beta[t + 1, s]
            if s + 1 < S:
                best = _logsumexp2(best, beta[t + 1, s + 1])
            if s + 2 < S and ext[s + 2] != blank and ext[s + 2] != ext[s]:
                best = _logsumexp2(best, beta[t + 1, s + 2])
            beta[t, s] = best + lp[t, ext[s]]

    # gradient wrt logits: y - (sum over states emitting k of the path
    # posterior), all in log space until the last moment
    y = np.exp(lp)
    grad = y.copy()
    gamma = alpha + beta  # includes lp[t, ext[s]] twice
    for k in range(n_out):
        cols = [s for s in range(S) if ext[s] == k]
        if not cols:
            continue
        g = np.full(T, NEG_INF)
        for s in cols:
            g = np.logaddexp(g, gamma[:, s])
        with np.errstate(invalid="ignore"):
            grad[:, k] -= np.exp(g - log_p - lp[:, k])
    return float(loss), grad


def ctc_decode(probs):
    """Best-path decoding: per-step argmax, collapse repeats, drop blanks."""
    probs = np.asarray(probs, dtype=float)
    path = probs.argmax(axis=1)
    return collapse(path, probs.shape[1] - 1)
