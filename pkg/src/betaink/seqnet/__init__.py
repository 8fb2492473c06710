"""From-scratch recurrent sequence classifier (LSTM + softmax, optional CTC)."""

from .network import NetConfig, SeqNet
from .ctc import CtcLengthError, ctc_loss, ctc_decode
from .training import SoftTarget, TrainConfig, fuzzy_targets, grad_check, train
from .model_io import save_model, load_model

__all__ = [
    "NetConfig",
    "SeqNet",
    "CtcLengthError",
    "ctc_loss",
    "ctc_decode",
    "SoftTarget",
    "TrainConfig",
    "fuzzy_targets",
    "grad_check",
    "train",
    "save_model",
    "load_model",
]
