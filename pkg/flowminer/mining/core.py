"""
core.py
=======
Chained pattern extraction over per-length next-event models.

Starting from single-event seeds, the model for length ``w`` extends every
candidate prefix of length ``w - 1`` with each event whose conditional
probability reaches ``theta_prime``; extensions reaching ``theta`` are emitted
as patterns. Events already in the prefix are never appended, so patterns
have pairwise-distinct events.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional, Sequence

from ..errors import MiningError, MissingModelError
from ..flows.core import EventType, causality_ok
from ..seq_model.base import SequenceModel
from ..traces.core import Trace, Vocabulary
from ..utils.logging import get_logger
from .config import MinerParams

logger = get_logger(__name__)

DEFAULT_SWEEP = (0.2, 0.4, 0.6, 0.8)


@dataclass(frozen=True)
class Pattern:
    """A sequence of at least two distinct events and the probability of each extension."""
    events: tuple
    step_probs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "step_probs", tuple(float(p) for p in self.step_probs))
        if len(self.events) < 2:
            raise ValueError(f"a pattern has at least two events, got {len(self.events)}")
        if len(set(self.events)) != len(self.events):
            raise ValueError("pattern events must be pairwise distinct")
        if self.step_probs and len(self.step_probs) != len(self.events) - 1:
            raise ValueError(
                f"expected {len(self.events) - 1} step probabilities, got {len(self.step_probs)}"
            )

    @property
    def length(self) -> int:
        return len(self.events)

    def is_causal(self) -> bool:
        """Every consecutive pair satisfies ``a.dest == b.src``."""
        return all(causality_ok(a, b) for a, b in zip(self.events, self.events[1:]))

    def to_dict(self) -> dict[str, Any]:
        return {
            "events": [e.to_dict() for e in self.events],
            "step_probs": list(self.step_probs),
            "length": self.length,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Pattern":
        return cls(tuple(EventType.from_dict(e) for e in d["events"]), tuple(d.get("step_probs", ())))

    def __str__(self) -> str:
        return " -> ".join(str(e) for e in self.events)


def _sort_key(p: Pattern) -> tuple:
    return (p.length, p.events)


def detect_initiating_events(traces: Sequence[Trace]) -> set:
    """
    Event types never preceded by an event sent to their source.

    An event type qualifies when, in every trace, no occurrence of it has an
    event ``e'`` with ``e'.dest == e.src`` in a strictly earlier timestep.
    Events sharing a timestep do not precede each other.
    """
    if not traces:
        raise MiningError("initiating-event detection needs at least one trace")
    seen: set = set()
    disqualified: set = set()
    for trace in traces:
        dests_before: set = set()
        for step in trace.steps:
            for e in step:
                seen.add(e.etype)
                if e.src in dests_before:
                    disqualified.add(e.etype)
            dests_before.update(e.dest for e in step)
    initiating = seen - disqualified
    logger.info("detected %d initiating events out of %d", len(initiating), len(seen))
    return initiating


def _check_models(models: Mapping[int, SequenceModel], vocab: Vocabulary, max_len: int) -> None:
    for w in range(2, max_len + 1):
        if w not in models:
            raise MissingModelError(w)
        if models[w].pattern_length != w:
            raise MiningError(f"model registered for length {w} was trained for length {models[w].pattern_length}")
        if models[w].vocabulary != vocab:
            raise MiningError(f"model for length {w} uses a different vocabulary")


def mine(
    models: Mapping[int, SequenceModel],
    vocab: Vocabulary,
    params: MinerParams,
    initiating: Optional[Iterable[EventType]] = None,
) -> list[Pattern]:
    """
    Extract patterns of length ``2..params.max_len``.

    Returns the patterns sorted by (length, events). Prefixes that a model has
    never seen are not extended.
    """
    _check_models(models, vocab, params.max_len)
    if params.initiating_filter and initiating is None:
        raise MiningError("the initiating filter needs a set of initiating events")
    initiating = set(initiating) if initiating is not None else None

    if params.initiating_filter and params.initiating_mode == "seed":
        seeds = [vocab.encode(e) for e in vocab if e in initiating]
    else:
        seeds = list(range(len(vocab)))

    candidates: list[tuple[tuple[int, ...], tuple[float, ...]]] = [((i,), ()) for i in seeds]
    emitted: dict[tuple[int, ...], tuple[float, ...]] = {}

    for w in range(2, params.max_len + 1):
        model = models[w]
        extended = []
        n_emitted = 0
        for prefix, probs in candidates:
            if not model.prefix_seen(prefix):
                continue
            dist = model.predict_dist(prefix)
            last = vocab.decode(prefix[-1])
            for e in range(len(vocab)):
                if e in prefix:
                    continue
                p = float(dist[e])
                if p < params.theta_prime:
                    continue
                if params.causality_filter and not causality_ok(last, vocab.decode(e)):
                    continue
                seq = prefix + (e,)
                step_probs = probs + (p,)
                if p >= params.theta:
                    emitted[seq] = step_probs
                    n_emitted += 1
                extended.append((seq, step_probs))
        candidates = extended
        logger.info("w=%d: %d patterns, %d candidates", w, n_emitted, len(candidates))
        if not candidates:
            break

    patterns = [Pattern(vocab.decode_sequence(seq), probs) for seq, probs in emitted.items()]
    if params.initiating_filter and params.initiating_mode == "post":
        patterns = [p for p in patterns if p.events[0] in initiating]
    return sorted(patterns, key=_sort_key)


def merge_patterns(*pattern_sets: Iterable[Pattern]) -> list[Pattern]:
    """Union of pattern sets; one record per event sequence, the one with the largest ``step_probs``."""
    best: dict[tuple, Pattern] = {}
    for patterns in pattern_sets:
        for p in patterns:
            current = best.get(p.events)
            if current is None or p.step_probs > current.step_probs:
                best[p.events] = p
    return sorted(best.values(), key=_sort_key)


def sweep_thresholds(
    models: Mapping[int, SequenceModel],
    vocab: Vocabulary,
    params: MinerParams,
    thetas: Sequence[float] = DEFAULT_SWEEP,
    initiating: Optional[Iterable[EventType]] = None,
) -> dict[float, list[Pattern]]:
    """Mine once per ``theta``; other parameters are kept."""
    initiating = set(initiating) if initiating is not None else None
    return {theta: mine(models, vocab, params.with_theta(theta), initiating) for theta in thetas}
