"""Minibatch SGD with momentum for ``LstmModel``."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from ..config.defaults import DEFAULT_CONFIG
from ..errors import ConfigError, TrainingDivergedError
from ..traces.core import Vocabulary
from ..utils.logging import get_logger, timed
from .base import TrainingWindow, check_windows
from .lstm import LstmModel, init_params, windows_to_arrays

logger = get_logger(__name__)

_SEQ = DEFAULT_CONFIG["SEQ_MODEL"]


@dataclass(frozen=True)
class LstmHyperparameters:
    """
    Training hyperparameters.

    The learning rate is halved whenever the epoch loss has not improved for
    ``plateau_patience`` consecutive epochs. Gradients are rescaled to a total
    L2 norm of at most ``clip_norm``.
    """
    hidden: int = _SEQ["hidden"]
    layers: int = _SEQ["layers"]
    batch_size: int = _SEQ["batch_size"]
    learning_rate: float = _SEQ["learning_rate"]
    momentum: float = _SEQ["momentum"]
    epochs: int = _SEQ["epochs"]
    clip_norm: float = _SEQ["clip_norm"]
    plateau_patience: int = _SEQ["plateau_patience"]
    init_scale: Optional[float] = _SEQ["init_scale"]

    def __post_init__(self):
        for name in ("hidden", "layers", "batch_size", "plateau_patience"):
            if getattr(self, name) < 1:
                raise ConfigError(f"seq_model.{name}", f"must be >= 1, got {getattr(self, name)}")
        if self.epochs < 0:
            raise ConfigError("seq_model.epochs", f"must be >= 0, got {self.epochs}")
        if not self.learning_rate > 0:
            raise ConfigError("seq_model.learning_rate", f"must be > 0, got {self.learning_rate}")
        if not 0 <= self.momentum < 1:
            raise ConfigError("seq_model.momentum", f"must be in [0, 1), got {self.momentum}")
        if not self.clip_norm > 0:
            raise ConfigError("seq_model.clip_norm", f"must be > 0, got {self.clip_norm}")
        if self.init_scale is not None and not self.init_scale > 0:
            raise ConfigError("seq_model.init_scale", f"must be > 0, got {self.init_scale}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "LstmHyperparameters":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError("seq_model", f"unknown hyperparameters {sorted(unknown)}")
        return cls(**dict(d))


def _clip(grads: dict[str, np.ndarray], max_norm: float) -> float:
    norm = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))
    if norm > max_norm:
        scale = max_norm / norm
        for g in grads.values():
            g *= scale
    return norm


@timed
def train_lstm(
    windows: Sequence[TrainingWindow],
    vocab: Vocabulary,
    hp: Optional[LstmHyperparameters] = None,
    seed: int = 0,
) -> LstmModel:
    """
    Train one model on ``windows`` (all of the same pattern length).

    One generator seeded with ``seed`` drives initialization and the
    per-epoch shuffles, so identical inputs give identical weights.

    Raises
    ------
    TrainingError          empty or inconsistent window list.
    TrainingDivergedError  the loss of a batch is not finite.
    """
    hp = hp or LstmHyperparameters()
    w = check_windows(windows, vocab)
    rng = np.random.default_rng(seed)
    params = init_params(len(vocab), hp.hidden, hp.layers, rng, hp.init_scale)
    model = LstmModel(w, vocab, params, hidden=hp.hidden, layers=hp.layers,
                      hyperparameters=hp.to_dict(), seed=seed)

    prefixes, labels = windows_to_arrays(windows)
    n = len(labels)
    velocity = {k: np.zeros_like(v) for k, v in model.params.items()}
    lr = hp.learning_rate
    best = np.inf
    stale = 0
    last_finite: Optional[float] = None
    history = []

    for epoch in range(hp.epochs):
        order = rng.permutation(n)
        total = 0.0
        for batch, start in enumerate(range(0, n, hp.batch_size)):
            idx = order[start:start + hp.batch_size]
            loss, grads = model.loss_and_gradients(prefixes[idx], labels[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch, batch, lr, last_finite)
            last_finite = loss
            _clip(grads, hp.clip_norm)
            for k, g in grads.items():
                velocity[k] = hp.momentum * velocity[k] - lr * g
                model.params[k] += velocity[k]
            total += loss * len(idx)

        epoch_loss = total / n
        history.append({"epoch": epoch, "loss": epoch_loss, "learning_rate": lr})
        logger.debug("w=%d epoch %d: loss=%.6f lr=%.4g", w, epoch, epoch_loss, lr)

        if epoch_loss < best:
            best = epoch_loss
            stale = 0
        else:
            stale += 1
            if stale >= hp.plateau_patience:
                lr /= 2.0
                stale = 0
                logger.warning("w=%d: loss plateaued at epoch %d, learning rate halved to %.4g", w, epoch, lr)

    for k, p in model.params.items():
        if not np.all(np.isfinite(p)):
            raise TrainingDivergedError(hp.epochs, -1, lr, last_finite)

    model.history = history
    if history:
        logger.info("w=%d: trained on %d windows, final loss %.6f", w, n, history[-1]["loss"])
    return model
