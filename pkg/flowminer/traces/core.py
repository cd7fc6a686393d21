"""Trace data model: timestep event-sets, linearization and vocabulary."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional, Sequence

from ..flows.core import EventType


@dataclass(frozen=True)
class EventInstance:
    """An event as observed in a trace: static identity plus optional ``addr``."""
    etype: EventType
    addr: Optional[int] = None

    def __post_init__(self):
        if self.addr is not None:
            if isinstance(self.addr, bool) or not isinstance(self.addr, int) or self.addr < 0:
                raise ValueError(f"addr must be a non-negative integer, got {self.addr!r}")

    @property
    def src(self) -> str:
        return self.etype.src

    @property
    def dest(self) -> str:
        return self.etype.dest

    @property
    def sort_key(self) -> tuple:
        # addr-less events sort before addressed ones with the same identity
        return (
            self.etype.src,
            self.etype.dest,
            self.etype.cmd,
            self.addr is not None,
            self.addr if self.addr is not None else 0,
        )

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = self.etype.to_dict()
        if self.addr is not None:
            d["addr"] = self.addr
        return d

    def __str__(self) -> str:
        return f"{self.etype}" if self.addr is None else f"{self.etype}({self.addr})"


def canonical_step(events: Iterable[EventInstance]) -> tuple:
    """Events of one timestep in canonical ``(src, dest, cmd, addr)`` order."""
    return tuple(sorted(events, key=lambda e: e.sort_key))


@dataclass(frozen=True)
class Trace:
    """
    Sequence of timesteps, each a non-empty multiset of ``EventInstance``.

    Steps are stored in canonical order; the order of events inside a step
    carries no meaning.
    """
    steps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        steps = []
        for i, step in enumerate(self.steps):
            step = canonical_step(step)
            if not step:
                raise ValueError(f"timestep {i} is empty")
            steps.append(step)
        object.__setattr__(self, "steps", tuple(steps))

    @classmethod
    def from_sequence(cls, events: Iterable[EventInstance]) -> "Trace":
        """One event per step."""
        return cls(tuple((e,) for e in events))

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def n_events(self) -> int:
        return sum(len(step) for step in self.steps)

    def instances(self) -> list[EventInstance]:
        """All event instances, step by step in canonical order (addr kept)."""
        return [e for step in self.steps for e in step]


def linearize(trace: Trace) -> list[EventType]:
    """
    Flatten ``trace`` into a sequence of static event identities.

    Steps are concatenated in order; within a step events follow the
    canonical sort order. ``addr`` is dropped.
    """
    return [e.etype for e in trace.instances()]


class Vocabulary:
    """Bijection between the distinct ``EventType`` of a corpus and ``0..|V|-1``."""

    def __init__(self, events: Iterable[EventType]):
        ordered = sorted(set(events))
        self._events: tuple[EventType, ...] = tuple(ordered)
        self._index: dict[EventType, int] = {e: i for i, e in enumerate(ordered)}

    @property
    def events(self) -> tuple[EventType, ...]:
        return self._events

    def __len__(self) -> int:
        return len(self._events)

    def __contains__(self, e: EventType) -> bool:
        return e in self._index

    def __iter__(self):
        return iter(self._events)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self._events == other._events

    def __repr__(self) -> str:
        return f"Vocabulary(size={len(self)})"

    def encode(self, e: EventType) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise KeyError(f"event '{e}' is not in the vocabulary") from None

    def decode(self, i: int) -> EventType:
        if not 0 <= i < len(self._events):
            raise IndexError(f"index {i} outside vocabulary of size {len(self)}")
        return self._events[i]

    def encode_sequence(self, events: Sequence[EventType]) -> tuple[int, ...]:
        return tuple(self.encode(e) for e in events)

    def decode_sequence(self, indices: Sequence[int]) -> tuple[EventType, ...]:
        return tuple(self.decode(i) for i in indices)

    def to_list(self) -> list[dict[str, str]]:
        return [e.to_dict() for e in self._events]

    @classmethod
    def from_list(cls, items: Sequence[Mapping[str, Any]]) -> "Vocabulary":
        vocab = cls(EventType.from_dict(d) for d in items)
        if len(vocab) != len(items):
            raise ValueError("vocabulary list contains duplicate events")
        expected = [EventType.from_dict(d) for d in items]
        if list(vocab.events) != expected:
            raise ValueError("vocabulary list is not in canonical order")
        return vocab


def build_vocabulary(traces: Iterable[Trace]) -> Vocabulary:
    """Distinct event identities occurring in ``traces``, canonically sorted."""
    return Vocabulary(e.etype for trace in traces for step in trace.steps for e in step)
