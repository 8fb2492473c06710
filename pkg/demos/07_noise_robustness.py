"""Tremble noise: raw point features vs. the perceptual chain.

The preprocessing low-pass strips tremble before segmentation, so the
perceptual features barely move while the raw pipeline degrades.  A small
version of the acceptance experiment.
"""

from betaink.corpus import NoiseSpec, default_digit_specs, synth_corpus
from betaink.experiment import run_experiment
from betaink.seqnet import TrainConfig

corpus = synth_corpus(default_digit_specs(), per_class=80, seed=40)
tremble = NoiseSpec(kind="tremble", sigma=0.06, tremble_hz=25.0, apply_to="both")


def rate(pipeline, noise):
    cfg = TrainConfig(epochs=15, batch_size=32, learning_rate=0.5, seed=41)
    return run_experiment(
        pipeline, cfg, corpus, split=0.75, seed=42, hidden_sizes=(48,), dropout_p=0.2, noise=noise
    ).recognition_rate


for pipeline in ("raw", "theta_epc", "perceptual_beta"):
    clean = rate(pipeline, None)
    noisy = rate(pipeline, tremble)
    print(f"{pipeline:16s} clean {clean:.3f}  trembled {noisy:.3f}  drop {clean - noisy:+.3f}")
