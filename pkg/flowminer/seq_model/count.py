"""Exact empirical next-event model: ``P(e | S) = count(S, e) / count(S)``."""

from __future__ import annotations

from collections import Counter
from typing import Any, Mapping, Sequence

import numpy as np

from ..errors import ModelError
from ..traces.core import Vocabulary
from .base import SequenceModel, TrainingWindow, check_windows


class CountModel(SequenceModel):
    """
    Frequency table of labels per prefix.

    Unseen prefixes get the uniform distribution and ``prefix_seen`` reports
    them, so the miner can decline to extend them.
    """

    kind = "count"

    def __init__(self, pattern_length: int, vocabulary: Vocabulary, counts: Mapping[tuple, Mapping[int, int]]):
        super().__init__(pattern_length, vocabulary)
        self._counts: dict[tuple, Counter] = {}
        for prefix, labels in counts.items():
            prefix = self._check_prefix(prefix)
            table = Counter({int(k): int(v) for k, v in labels.items() if int(v) > 0})
            if any(not 0 <= k < len(vocabulary) for k in table):
                raise ModelError(f"label outside the vocabulary for prefix {prefix}")
            if table:
                self._counts[prefix] = table

    @property
    def counts(self) -> dict[tuple, Counter]:
        return self._counts

    def prefixes(self) -> list[tuple]:
        return sorted(self._counts)

    def prefix_seen(self, prefix: Sequence[int]) -> bool:
        return self._check_prefix(prefix) in self._counts

    def _dist(self, prefix: tuple[int, ...]) -> np.ndarray:
        n = len(self.vocabulary)
        table = self._counts.get(prefix)
        if table is None:
            return np.full(n, 1.0 / n)
        total = sum(table.values())
        dist = np.zeros(n)
        for label, count in table.items():
            dist[label] = count / total
        return dist

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "w": self.pattern_length,
            "vocabulary": self.vocabulary.to_list(),
            "counts": [
                {"prefix": list(prefix), "labels": sorted([k, v] for k, v in self._counts[prefix].items())}
                for prefix in self.prefixes()
            ],
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "CountModel":
        vocab = Vocabulary.from_list(d["vocabulary"])
        counts = {tuple(item["prefix"]): {k: v for k, v in item["labels"]} for item in d["counts"]}
        return cls(int(d["w"]), vocab, counts)


def fit_count_model(windows: Sequence[TrainingWindow], vocab: Vocabulary) -> CountModel:
    """Count model from ``windows`` (all of the same pattern length)."""
    w = check_windows(windows, vocab)
    counts: dict[tuple, Counter] = {}
    for win in windows:
        counts.setdefault(win.prefix, Counter())[win.label] += 1
    return CountModel(w, vocab, counts)
