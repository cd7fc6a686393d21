"""
Per-length next-event models: an exact count model and a numpy LSTM.

Typical usage::

    from flowminer.seq_model import windows_from_sequences, fit_count_model

    windows = windows_from_sequences(encoded_subtraces, w=3)
    model = fit_count_model(windows, vocab)
    model.predict_dist(windows[0].prefix)
"""

from .base import (
    SequenceModel,
    TrainingWindow,
    check_windows,
    make_training_windows,
    predict_dist,
    windows_from_sequences,
)
from .count import CountModel, fit_count_model
from .io import load_model, load_models, model_from_dict, model_path, save_model, save_models
from .lstm import LstmModel, gradient_check, init_lstm, loss_and_gradients
from .training import LstmHyperparameters, train_lstm

__all__ = [
    "SequenceModel",
    "TrainingWindow",
    "check_windows",
    "make_training_windows",
    "predict_dist",
    "windows_from_sequences",
    "CountModel",
    "fit_count_model",
    "load_model",
    "load_models",
    "model_from_dict",
    "model_path",
    "save_model",
    "save_models",
    "LstmModel",
    "gradient_check",
    "init_lstm",
    "loss_and_gradients",
    "LstmHyperparameters",
    "train_lstm",
]
