"""
lstm.py
=======
Stacked LSTM next-event model written directly against numpy.

Architecture:
  • one-hot input of dimension |V|
  • ``layers`` recurrent layers of width H; each layer keeps its gate weights
    stacked as ``W`` (4H × D_in), ``U`` (4H × H) and ``b`` (4H) in the order
    input, forget, output, candidate
  • dense output layer ``Wout`` (|V| × H), ``bout`` (|V|) on the last hidden
    state of the top layer, followed by softmax

Gate equations (per step)::

    z = W x + U h + b
    i, f, o = σ(z_i), σ(z_f), σ(z_o);  g = tanh(z_g)
    c' = f ⊙ c + i ⊙ g;  h' = o ⊙ tanh(c')

Gradients are computed analytically by backpropagation through time and can
be checked against central finite differences with ``gradient_check``.
"""

from __future__ import annotations

from typing import Any, Mapping, Optional, Sequence

import numpy as np
from scipy.special import expit, logsumexp, softmax

from ..errors import ModelError
from ..traces.core import Vocabulary
from .base import SequenceModel, TrainingWindow


# ── Parameters ────────────────────────────────────────────────────────────────

def _param_names(layers: int) -> list[str]:
    names = []
    for l in range(layers):
        names.extend([f"W{l}", f"U{l}", f"b{l}"])
    return names + ["Wout", "bout"]


def init_params(
    vocab_size: int,
    hidden: int,
    layers: int,
    rng: np.random.Generator,
    init_scale: Optional[float] = None,
) -> dict[str, np.ndarray]:
    """Uniform(±scale) weights, zero biases except a forget-gate bias of 1."""
    scale = 1.0 / np.sqrt(hidden) if init_scale is None else float(init_scale)
    params: dict[str, np.ndarray] = {}
    d_in = vocab_size
    for l in range(layers):
        params[f"W{l}"] = rng.uniform(-scale, scale, size=(4 * hidden, d_in))
        params[f"U{l}"] = rng.uniform(-scale, scale, size=(4 * hidden, hidden))
        b = np.zeros(4 * hidden)
        b[hidden:2 * hidden] = 1.0
        params[f"b{l}"] = b
        d_in = hidden
    params["Wout"] = rng.uniform(-scale, scale, size=(vocab_size, hidden))
    params["bout"] = np.zeros(vocab_size)
    return params


# ── Model ─────────────────────────────────────────────────────────────────────

class LstmModel(SequenceModel):
    """Two-layer (by default) LSTM over one-hot events."""

    kind = "lstm"

    def __init__(
        self,
        pattern_length: int,
        vocabulary: Vocabulary,
        params: Mapping[str, np.ndarray],
        hidden: int,
        layers: int,
        hyperparameters: Optional[Mapping[str, Any]] = None,
        seed: int = 0,
        history: Optional[Sequence[Mapping[str, Any]]] = None,
    ):
        super().__init__(pattern_length, vocabulary)
        if layers < 1 or hidden < 1:
            raise ModelError(f"layers and hidden must be >= 1, got layers={layers}, hidden={hidden}")
        self.hidden = int(hidden)
        self.layers = int(layers)
        self.hyperparameters = dict(hyperparameters or {})
        self.seed = int(seed)
        self.history = [dict(h) for h in (history or [])]
        self.params = {k: np.asarray(params[k], dtype=np.float64) for k in _param_names(self.layers)}
        self._check_shapes()

    def _check_shapes(self) -> None:
        v, h = len(self.vocabulary), self.hidden
        expected = {}
        d_in = v
        for l in range(self.layers):
            expected[f"W{l}"] = (4 * h, d_in)
            expected[f"U{l}"] = (4 * h, h)
            expected[f"b{l}"] = (4 * h,)
            d_in = h
        expected["Wout"] = (v, h)
        expected["bout"] = (v,)
        for name, shape in expected.items():
            if self.params[name].shape != shape:
                raise ModelError(f"parameter {name} has shape {self.params[name].shape}, expected {shape}")
            if not np.all(np.isfinite(self.params[name])):
                raise ModelError(f"parameter {name} contains non-finite values")

    @property
    def param_names(self) -> list[str]:
        return _param_names(self.layers)

    # ── forward / backward ──

    def _forward(self, prefixes: np.ndarray) -> tuple[np.ndarray, list, np.ndarray]:
        """Logits (B × V) for a batch of prefixes (B × T index matrix)."""
        H = self.hidden
        B, T = prefixes.shape
        inputs = [np.eye(len(self.vocabulary))[prefixes[:, t]] for t in range(T)]
        caches = []
        for l in range(self.layers):
            W, U, b = self.params[f"W{l}"], self.params[f"U{l}"], self.params[f"b{l}"]
            h = np.zeros((B, H))
            c = np.zeros((B, H))
            layer_cache = []
            outputs = []
            for t in range(T):
                x = inputs[t]
                z = x @ W.T + h @ U.T + b
                i = expit(z[:, :H])
                f = expit(z[:, H:2 * H])
                o = expit(z[:, 2 * H:3 * H])
                g = np.tanh(z[:, 3 * H:])
                c_next = f * c + i * g
                tc = np.tanh(c_next)
                layer_cache.append((x, h, c, i, f, o, g, tc))
                h = o * tc
                c = c_next
                outputs.append(h)
            caches.append(layer_cache)
            inputs = outputs
        h_top = inputs[-1]
        logits = h_top @ self.params["Wout"].T + self.params["bout"]
        return logits, caches, h_top

    def _backward(
        self, caches: list, h_top: np.ndarray, dlogits: np.ndarray
    ) -> dict[str, np.ndarray]:
        H = self.hidden
        grads: dict[str, np.ndarray] = {
            "Wout": dlogits.T @ h_top,
            "bout": dlogits.sum(axis=0),
        }
        T = len(caches[0])
        dh_ext: list[np.ndarray] = [np.zeros_like(h_top) for _ in range(T)]
        dh_ext[-1] = dlogits @ self.params["Wout"]

        for l in reversed(range(self.layers)):
            W, U = self.params[f"W{l}"], self.params[f"U{l}"]
            dW = np.zeros_like(W)
            dU = np.zeros_like(U)
            db = np.zeros(4 * H)
            dh_next = np.zeros_like(h_top)
            dc_next = np.zeros_like(h_top)
            dx: list[np.ndarray] = [None] * T  # type: ignore[list-item]
            for t in reversed(range(T)):
                x, h_prev, c_prev, i, f, o, g, tc = caches[l][t]
                dh = dh_ext[t] + dh_next
                do = dh * tc
                dc = dh * o * (1.0 - tc ** 2) + dc_next
                di = dc * g
                dg = dc * i
                df = dc * c_prev
                dc_next = dc * f
                dz = np.hstack([
                    di * i * (1.0 - i),
                    df * f * (1.0 - f),
                    do * o * (1.0 - o),
                    dg * (1.0 - g ** 2),
                ])
                dW += dz.T @ x
                dU += dz.T @ h_prev
                db += dz.sum(axis=0)
                dx[t] = dz @ W
                dh_next = dz @ U
            grads[f"W{l}"] = dW
            grads[f"U{l}"] = dU
            grads[f"b{l}"] = db
            dh_ext = dx
        return grads

    def loss(self, prefixes: np.ndarray, labels: np.ndarray) -> float:
        """Mean cross-entropy of ``labels`` under the predicted distributions."""
        logits, _, _ = self._forward(prefixes)
        logp = logits - logsumexp(logits, axis=1, keepdims=True)
        return float(-logp[np.arange(len(labels)), labels].mean())

    def loss_and_gradients(self, prefixes: np.ndarray, labels: np.ndarray) -> tuple[float, dict[str, np.ndarray]]:
        prefixes = np.asarray(prefixes, dtype=np.int64)
        labels = np.asarray(labels, dtype=np.int64)
        if prefixes.ndim != 2 or len(prefixes) == 0 or len(prefixes) != len(labels):
            raise ModelError("loss_and_gradients needs a non-empty batch of prefixes and matching labels")
        B = len(labels)
        logits, caches, h_top = self._forward(prefixes)
        logp = logits - logsumexp(logits, axis=1, keepdims=True)
        loss = float(-logp[np.arange(B), labels].mean())
        dlogits = np.exp(logp)
        dlogits[np.arange(B), labels] -= 1.0
        dlogits /= B
        return loss, self._backward(caches, h_top, dlogits)

    def _dist(self, prefix: tuple[int, ...]) -> np.ndarray:
        logits, _, _ = self._forward(np.asarray([prefix], dtype=np.int64))
        return softmax(logits[0])

    # ── serialization ──

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "w": self.pattern_length,
            "vocabulary": self.vocabulary.to_list(),
            "hidden": self.hidden,
            "layers": self.layers,
            "hyperparameters": self.hyperparameters,
            "seed": self.seed,
            "weights": {name: self.params[name].tolist() for name in self.param_names},
            "history": self.history,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "LstmModel":
        return cls(
            pattern_length=int(d["w"]),
            vocabulary=Vocabulary.from_list(d["vocabulary"]),
            params={k: np.asarray(v, dtype=np.float64) for k, v in d["weights"].items()},
            hidden=int(d["hidden"]),
            layers=int(d["layers"]),
            hyperparameters=d.get("hyperparameters"),
            seed=int(d.get("seed", 0)),
            history=d.get("history"),
        )


def init_lstm(
    w: int,
    vocab: Vocabulary,
    hidden: int = 64,
    layers: int = 2,
    seed: int = 0,
    init_scale: Optional[float] = None,
) -> LstmModel:
    """Randomly initialized (untrained) model."""
    rng = np.random.default_rng(seed)
    params = init_params(len(vocab), hidden, layers, rng, init_scale)
    return LstmModel(w, vocab, params, hidden=hidden, layers=layers, seed=seed)


def windows_to_arrays(windows: Sequence[TrainingWindow]) -> tuple[np.ndarray, np.ndarray]:
    prefixes = np.asarray([win.prefix for win in windows], dtype=np.int64)
    labels = np.asarray([win.label for win in windows], dtype=np.int64)
    return prefixes, labels


def loss_and_gradients(model: LstmModel, windows: Sequence[TrainingWindow]) -> tuple[float, dict[str, np.ndarray]]:
    return model.loss_and_gradients(*windows_to_arrays(windows))


def gradient_check(
    model: LstmModel,
    windows: Sequence[TrainingWindow],
    eps: float = 1e-5,
    floor: float = 1e-4,
) -> float:
    """
    Maximum relative error between analytical and central-difference gradients.

    The error of one element is ``|a - n| / max(|a| + |n|, floor)``; every
    element of every parameter is perturbed, so keep the model small.
    """
    prefixes, labels = windows_to_arrays(windows)
    _, grads = model.loss_and_gradients(prefixes, labels)
    worst = 0.0
    for name in model.param_names:
        p = model.params[name]
        for idx in np.ndindex(p.shape):
            saved = p[idx]
            p[idx] = saved + eps
            up = model.loss(prefixes, labels)
            p[idx] = saved - eps
            down = model.loss(prefixes, labels)
            p[idx] = saved
            numeric = (up - down) / (2.0 * eps)
            analytic = grads[name][idx]
            err = abs(analytic - numeric) / max(abs(analytic) + abs(numeric), floor)
            worst = max(worst, err)
    return worst
