"""Train a small recognizer on the synthetic digits and save the model.

Uses the fuzzy-membership + stroke-parameter features (the strongest
pipeline).  Runs in under a minute; the acceptance suite runs the full
500/100-per-class version.
"""

from pathlib import Path

from betaink.corpus import default_digit_specs, synth_corpus
from betaink.experiment import run_experiment
from betaink.seqnet import TrainConfig
from betaink.seqnet.model_io import save_model

corpus = synth_corpus(default_digit_specs(), per_class=60, seed=5)
report, bundle = run_experiment(
    "perceptual_beta",
    TrainConfig(mode="framewise", epochs=15, batch_size=32, learning_rate=0.5, seed=1),
    corpus,
    split=5 / 6,
    seed=7,
    hidden_sizes=(64,),
    dropout_p=0.2,
    return_bundle=True,
)

print("held-out recognition rate:", report.recognition_rate)
print("per class:", {k: round(v, 2) for k, v in report.per_class.items()})

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
save_model(bundle, out / "digits_model.json")
print("wrote", out / "digits_model.json")
print("serve it with:  betaink serve --model", out / "digits_model.json")
