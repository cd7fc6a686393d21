"""
core.py
=======
Trace slicing: split a trace into sub-traces that keep unrelated events apart.

- Address slicing groups events by their ``addr`` payload.
- Causality slicing chains each event onto the sub-trace whose last event
  was sent to the event's source; when several sub-traces qualify they are
  merged (interleaved by original trace position) before appending.

Every sub-trace is an order-preserving projection of the linearized trace;
``positions`` records the index of each event in that linearization.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

from ..errors import SlicingError
from ..traces.core import EventInstance, Trace
from ..utils.logging import get_logger

logger = get_logger(__name__)

SliceMethod = Literal["none", "address", "causality", "address_then_causality"]
AddrPolicy = Literal["copy", "residual"]

SLICE_METHODS: tuple[str, ...] = ("none", "address", "causality", "address_then_causality")
ADDR_POLICIES: tuple[str, ...] = ("copy", "residual")

# CLI spelling of the composed method
METHOD_ALIASES = {"address+causality": "address_then_causality"}


@dataclass(frozen=True)
class SubTrace:
    """A projection of a trace: events in trace order, one per step."""
    events: tuple
    origin: str
    key: Optional[int] = None
    positions: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "positions", tuple(self.positions))

    def __len__(self) -> int:
        return len(self.events)

    def etypes(self) -> list:
        return [e.etype for e in self.events]

    def to_trace(self) -> Trace:
        """Singleton-step trace holding the sub-trace events."""
        return Trace.from_sequence(self.events)


def _indexed(events: Sequence[EventInstance]) -> list[tuple[int, EventInstance]]:
    return list(enumerate(events))


def _make(items: Sequence[tuple[int, EventInstance]], origin: str, key: Optional[int]) -> SubTrace:
    return SubTrace(
        events=tuple(e for _, e in items),
        origin=origin,
        key=key,
        positions=tuple(p for p, _ in items),
    )


def _address_slice_items(
    items: Sequence[tuple[int, EventInstance]],
    policy: AddrPolicy,
) -> list[tuple[Optional[int], list[tuple[int, EventInstance]]]]:
    groups: dict[int, list[tuple[int, EventInstance]]] = {}
    unaddressed: list[tuple[int, EventInstance]] = []
    for pos, e in items:
        if e.addr is None:
            unaddressed.append((pos, e))
        else:
            groups.setdefault(e.addr, []).append((pos, e))

    out: list[tuple[Optional[int], list[tuple[int, EventInstance]]]] = []
    if policy == "copy":
        if not groups and unaddressed:
            # Nothing to copy into: keep the addr-less events as one slice.
            return [(None, unaddressed)]
        for addr in sorted(groups):
            merged = list(heapq.merge(groups[addr], unaddressed, key=lambda item: item[0]))
            out.append((addr, merged))
    else:
        for addr in sorted(groups):
            out.append((addr, groups[addr]))
        if unaddressed:
            out.append((None, unaddressed))
    return out


def address_slice(trace: Trace, policy: AddrPolicy = "copy") -> list[SubTrace]:
    """
    One sub-trace per distinct ``addr`` value, sorted by address.

    policy : 'copy' puts addr-less events into every address slice;
             'residual' collects them in one extra slice with ``key=None``.
    """
    if policy not in ADDR_POLICIES:
        raise SlicingError(f"unknown addr policy '{policy}' (expected one of {ADDR_POLICIES})")
    items = _indexed(trace.instances())
    return [_make(group, "address", key) for key, group in _address_slice_items(items, policy)]


def _causality_slice_items(
    items: Sequence[tuple[int, EventInstance]],
) -> list[list[tuple[int, EventInstance]]]:
    # Open sub-traces by id; ``by_dest`` indexes them by the dest of their last event.
    open_traces: dict[int, list[tuple[int, EventInstance]]] = {}
    by_dest: dict[str, set[int]] = {}
    next_id = 0

    def _tail_dest(sid: int) -> str:
        return open_traces[sid][-1][1].dest

    for pos, e in items:
        matches = sorted(by_dest.get(e.src, ()))
        if not matches:
            sid = next_id
            next_id += 1
            open_traces[sid] = [(pos, e)]
        elif len(matches) == 1:
            sid = matches[0]
            by_dest[_tail_dest(sid)].discard(sid)
            open_traces[sid].append((pos, e))
        else:
            for m in matches:
                by_dest[_tail_dest(m)].discard(m)
            merged = list(heapq.merge(*(open_traces.pop(m) for m in matches), key=lambda item: item[0]))
            sid = matches[0]
            merged.append((pos, e))
            open_traces[sid] = merged
        by_dest.setdefault(e.dest, set()).add(sid)

    return sorted(open_traces.values(), key=lambda group: group[0][0])


def causality_slice(trace: Trace) -> list[SubTrace]:
    """
    Chain events into sub-traces by the causality property.

    Events are visited in trace order (canonical order within a step). An
    event joins the sub-trace whose last event has ``dest == event.src``; it
    opens a new sub-trace when there is none, and merges all candidates when
    there are several. Sub-traces are returned by position of their first event.
    """
    items = _indexed(trace.instances())
    return [_make(group, "causality", None) for group in _causality_slice_items(items)]


def slice_trace(
    trace: Trace,
    method: SliceMethod = "none",
    addr_policy: AddrPolicy = "copy",
) -> list[SubTrace]:
    """
    Dispatch to a slicing method.

    'none' yields the linearized trace as a single sub-trace;
    'address_then_causality' runs causality slicing inside each address slice.
    """
    method = METHOD_ALIASES.get(method, method)
    if method == "none":
        return [_make(_indexed(trace.instances()), "none", None)]
    if method == "address":
        return address_slice(trace, policy=addr_policy)
    if method == "causality":
        return causality_slice(trace)
    if method == "address_then_causality":
        if addr_policy not in ADDR_POLICIES:
            raise SlicingError(f"unknown addr policy '{addr_policy}' (expected one of {ADDR_POLICIES})")
        out: list[SubTrace] = []
        items = _indexed(trace.instances())
        for key, group in _address_slice_items(items, addr_policy):
            for chain in _causality_slice_items(group):
                out.append(_make(chain, "address+causality", key))
        return out
    raise SlicingError(f"unknown slicing method '{method}' (expected one of {SLICE_METHODS})")


def slice_traces(
    traces: Sequence[Trace],
    method: SliceMethod = "none",
    addr_policy: AddrPolicy = "copy",
) -> list[list[SubTrace]]:
    """Slice every trace; one list of sub-traces per input trace."""
    out = [slice_trace(t, method=method, addr_policy=addr_policy) for t in traces]
    logger.info(
        "sliced %d traces with method=%s into %d sub-traces",
        len(traces), method, sum(len(s) for s in out),
    )
    return out
