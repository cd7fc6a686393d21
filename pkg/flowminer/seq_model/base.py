"""
base.py
=======
Training windows and the interface shared by every next-event model.

A model for pattern length ``w`` is trained on windows ``(S, e_w)`` where
``S`` holds the ``w - 1`` events that precede ``e_w`` in a sequence, and
answers ``P(e | S)`` for every event ``e`` of the vocabulary.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from ..errors import ModelError, TrainingError
from ..traces.core import Vocabulary


@dataclass(frozen=True)
class TrainingWindow:
    """One ``(prefix, label)`` pair of vocabulary indices."""
    prefix: tuple
    label: int

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(i) for i in self.prefix))
        object.__setattr__(self, "label", int(self.label))
        if not self.prefix:
            raise ValueError("a training window needs a prefix of at least one event")

    @property
    def length(self) -> int:
        """Pattern length ``w`` the window trains."""
        return len(self.prefix) + 1


def make_training_windows(seq: Sequence[int], w: int) -> list[TrainingWindow]:
    """
    Sliding windows of length ``w`` over ``seq``.

    A sequence of ``k`` events yields ``k - w + 1`` windows; sequences shorter
    than ``w`` yield none.
    """
    if w < 2:
        raise ValueError(f"pattern length must be >= 2, got {w}")
    seq = tuple(seq)
    return [TrainingWindow(seq[i:i + w - 1], seq[i + w - 1]) for i in range(len(seq) - w + 1)]


def windows_from_sequences(seqs: Iterable[Sequence[int]], w: int) -> list[TrainingWindow]:
    """Windows of every sequence, concatenated; no window spans two sequences."""
    out: list[TrainingWindow] = []
    for seq in seqs:
        out.extend(make_training_windows(seq, w))
    return out


def check_windows(windows: Sequence[TrainingWindow], vocab: Vocabulary) -> int:
    """Validate a training set and return its pattern length."""
    if not windows:
        raise TrainingError("cannot train on an empty window list")
    lengths = {win.length for win in windows}
    if len(lengths) > 1:
        raise TrainingError(f"windows of mixed pattern lengths {sorted(lengths)}")
    n = len(vocab)
    for win in windows:
        if any(not 0 <= i < n for i in (*win.prefix, win.label)):
            raise TrainingError(f"window {win} references indices outside a vocabulary of size {n}")
    return lengths.pop()


class SequenceModel(ABC):
    """
    Next-event model for one pattern length.

    Subclasses implement ``_dist``; ``predict_dist`` validates the prefix and
    returns a probability vector over the vocabulary.
    """

    kind: str = ""

    def __init__(self, pattern_length: int, vocabulary: Vocabulary):
        if pattern_length < 2:
            raise ModelError(f"pattern length must be >= 2, got {pattern_length}")
        self._w = int(pattern_length)
        self._vocab = vocabulary

    @property
    def pattern_length(self) -> int:
        return self._w

    @property
    def vocabulary(self) -> Vocabulary:
        return self._vocab

    def _check_prefix(self, prefix: Sequence[int]) -> tuple[int, ...]:
        prefix = tuple(int(i) for i in prefix)
        if len(prefix) != self._w - 1:
            raise ModelError(
                f"model for length {self._w} expects a prefix of {self._w - 1} events, got {len(prefix)}"
            )
        n = len(self._vocab)
        bad = [i for i in prefix if not 0 <= i < n]
        if bad:
            raise ModelError(f"prefix indices {bad} are outside a vocabulary of size {n}")
        return prefix

    def predict_dist(self, prefix: Sequence[int]) -> np.ndarray:
        """``P(e | prefix)`` for every vocabulary index ``e``."""
        return self._dist(self._check_prefix(prefix))

    def prefix_seen(self, prefix: Sequence[int]) -> bool:
        """Whether the distribution for ``prefix`` is backed by training data."""
        self._check_prefix(prefix)
        return True

    @abstractmethod
    def _dist(self, prefix: tuple[int, ...]) -> np.ndarray:
        ...

    @abstractmethod
    def to_dict(self) -> dict[str, Any]:
        ...

    def __repr__(self) -> str:
        return f"{type(self).__name__}(w={self._w}, vocabulary={len(self._vocab)})"


def predict_dist(model: SequenceModel, prefix: Sequence[int]) -> np.ndarray:
    return model.predict_dist(prefix)
