"""
core.py
=======
System flows as labeled, 1-safe Petri nets.

A flow is a tuple ``(places, transitions, labeling, initial, end)``. Every
transition is labeled with the event it emits; an *execution* of the flow is
the event sequence of a firing sequence that starts from the initial marking
and finishes with a transition whose postset lies inside the end marking.

Markings are plain ``frozenset`` objects of place identifiers: the nets are
safe, so a place holds at most one token.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional

from ..errors import FlowInputError, TransitionNotEnabledError, UnboundedFlowError
from ..utils.logging import get_logger

logger = get_logger(__name__)

Marking = frozenset


# ---------------------------------------------------------------------------
# Data classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class EventType:
    """
    Static identity of a message: ``cmd`` sent from ``src`` to ``dest``.

    Ordering is lexicographic over ``(src, dest, cmd)``, which is the
    canonical order used for vocabularies and within-step linearization.
    """
    src: str
    dest: str
    cmd: str

    def __post_init__(self):
        for name in ("src", "dest", "cmd"):
            value = getattr(self, name)
            if not isinstance(value, str) or not value.strip():
                raise ValueError(f"EventType.{name} must be a non-empty token, got {value!r}")

    def __str__(self) -> str:
        return f"{self.src}:{self.dest}:{self.cmd}"

    def to_dict(self) -> dict[str, str]:
        return {"src": self.src, "dest": self.dest, "cmd": self.cmd}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "EventType":
        return cls(src=d["src"], dest=d["dest"], cmd=d["cmd"])


@dataclass(frozen=True)
class Transition:
    """A transition with its preset (•t) and postset (t•)."""
    id: str
    preset: frozenset = field(default_factory=frozenset)
    postset: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "preset", frozenset(self.preset))
        object.__setattr__(self, "postset", frozenset(self.postset))


@dataclass(frozen=True, eq=False)
class Flow:
    """
    A system flow.

    ``labeling`` maps transition ids to the event each transition emits. The
    constructor only normalizes containers; well-formedness is checked by
    ``validate_flow`` so that a malformed flow can still be inspected.

    ``addressed`` tells the simulator whether instances of this flow carry a
    memory address on their events.
    """
    name: str
    places: frozenset
    transitions: tuple
    labeling: Mapping[str, EventType]
    initial_marking: frozenset
    end_marking: frozenset
    addressed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "places", frozenset(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "labeling", dict(self.labeling))
        object.__setattr__(self, "initial_marking", frozenset(self.initial_marking))
        object.__setattr__(self, "end_marking", frozenset(self.end_marking))

    @property
    def transition_ids(self) -> list[str]:
        return [t.id for t in self.transitions]

    def transition(self, transition_id: str) -> Transition:
        for t in self.transitions:
            if t.id == transition_id:
                return t
        raise KeyError(f"flow '{self.name}' has no transition '{transition_id}'")

    @property
    def events(self) -> set[EventType]:
        """Distinct event labels used by this flow."""
        return set(self.labeling.values())

    def __repr__(self) -> str:
        return (
            f"Flow(name={self.name!r}, places={len(self.places)}, "
            f"transitions={len(self.transitions)})"
        )


@dataclass(frozen=True)
class Execution:
    """
    One execution of a flow: the emitted events plus the firing sequence
    (transition ids) that produced them.
    """
    events: tuple
    firing: tuple = ()
    flow: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "firing", tuple(self.firing))
        if not self.events:
            raise ValueError("an execution contains at least one event")

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class Violation:
    """One finding of ``validate_flow``. Errors block enumeration; warnings do not."""
    severity: str   # 'error' | 'warning'
    code: str
    message: str

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def __str__(self) -> str:
        return f"[{self.severity}] {self.code}: {self.message}"


# ---------------------------------------------------------------------------
# Firing rule
# ---------------------------------------------------------------------------

def _check_marking(flow: Flow, marking: Iterable[str]) -> frozenset:
    marking = frozenset(marking)
    unknown = marking - flow.places
    if unknown:
        raise FlowInputError(
            f"marking references places unknown to flow '{flow.name}': {sorted(unknown)}"
        )
    return marking


def enabled(flow: Flow, marking: Iterable[str]) -> frozenset:
    """Transitions ``t`` with ``•t ⊆ marking``."""
    marking = _check_marking(flow, marking)
    return frozenset(t for t in flow.transitions if t.preset <= marking)


def fire(flow: Flow, marking: Iterable[str], t: Transition) -> frozenset:
    """Fire ``t`` at ``marking``: ``(marking − •t) ∪ t•``."""
    marking = _check_marking(flow, marking)
    if not t.preset <= marking:
        raise TransitionNotEnabledError(
            f"transition '{t.id}' of flow '{flow.name}' is not enabled at {sorted(marking)}"
        )
    return (marking - t.preset) | t.postset


# ---------------------------------------------------------------------------
# Executions
# ---------------------------------------------------------------------------

def _successors(flow: Flow, marking: frozenset, last: Optional[Transition]) -> list[Transition]:
    """
    Transitions that may follow ``last`` in an execution: enabled at
    ``marking`` and, for the first step, consuming the whole initial marking;
    afterwards, drawing their preset from the previous postset.
    """
    out = []
    for t in sorted(enabled(flow, marking), key=lambda t: t.id):
        if last is None:
            if flow.initial_marking <= t.preset:
                out.append(t)
        elif t.preset <= last.postset:
            out.append(t)
    return out


def _is_final(flow: Flow, t: Transition) -> bool:
    return t.postset <= flow.end_marking


def enumerate_firings(flow: Flow, max_steps: int = 64) -> list[tuple[str, ...]]:
    """
    All firing sequences (transition ids) that form executions of ``flow``.

    Depth-first search from the initial marking. A path ends at the first
    transition satisfying the end condition. A path that revisits a marking
    already seen on it is dropped; a path longer than ``max_steps`` raises
    ``UnboundedFlowError``.
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be positive, got {max_steps}")

    firings: list[tuple[str, ...]] = []

    def _walk(marking: frozenset, last: Optional[Transition], path: list[Transition],
              seen: frozenset) -> None:
        candidates = _successors(flow, marking, last)
        if not candidates:
            logger.debug("flow %s: dead end after %s", flow.name, [t.id for t in path])
            return
        if len(path) >= max_steps:
            raise UnboundedFlowError(flow.name, max_steps)
        for t in candidates:
            nxt = fire(flow, marking, t)
            if _is_final(flow, t):
                firings.append(tuple(p.id for p in path) + (t.id,))
                continue
            if nxt in seen:
                logger.debug("flow %s: marking revisited via %s, path dropped", flow.name, t.id)
                continue
            path.append(t)
            _walk(nxt, t, path, seen | {nxt})
            path.pop()

    _walk(flow.initial_marking, None, [], frozenset([flow.initial_marking]))
    return firings


def enumerate_executions(flow: Flow, max_steps: int = 64) -> list[Execution]:
    """
    Every execution of ``flow``, in depth-first order of transition ids.

    Each execution keeps the firing sequence it was produced from.
    """
    executions = []
    for firing in enumerate_firings(flow, max_steps=max_steps):
        events = tuple(flow.labeling[tid] for tid in firing)
        executions.append(Execution(events=events, firing=firing, flow=flow.name))
    return executions


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def causality_ok(e1: EventType, e2: EventType) -> bool:
    """Cause-effect relation between consecutive events: ``e1.dest == e2.src``."""
    return e1.dest == e2.src


def _structural_violations(flow: Flow) -> list[Violation]:
    out: list[Violation] = []
    if not flow.name:
        out.append(Violation("error", "unnamed flow", "flow name is empty"))
    if not flow.places:
        out.append(Violation("error", "no places", "flow has no places"))
    if not flow.initial_marking:
        out.append(Violation("error", "empty initial marking", "initial marking is empty"))
    elif not flow.initial_marking <= flow.places:
        out.append(Violation(
            "error", "unknown place",
            f"initial marking uses unknown places {sorted(flow.initial_marking - flow.places)}",
        ))
    if not flow.end_marking:
        out.append(Violation("error", "empty end marking", "end marking is empty"))
    elif not flow.end_marking <= flow.places:
        out.append(Violation(
            "error", "unknown place",
            f"end marking uses unknown places {sorted(flow.end_marking - flow.places)}",
        ))

    ids = flow.transition_ids
    duplicates = sorted({tid for tid in ids if ids.count(tid) > 1})
    if duplicates:
        out.append(Violation("error", "duplicate transition", f"duplicate ids {duplicates}"))

    for t in flow.transitions:
        if not t.preset:
            out.append(Violation("error", "empty preset", f"transition '{t.id}' has an empty preset"))
        if not t.postset:
            out.append(Violation("error", "empty postset", f"transition '{t.id}' has an empty postset"))
        unknown = (t.preset | t.postset) - flow.places
        if unknown:
            out.append(Violation(
                "error", "unknown place",
                f"transition '{t.id}' uses unknown places {sorted(unknown)}",
            ))
        if t.id not in flow.labeling:
            out.append(Violation("error", "unlabeled transition", f"transition '{t.id}' has no event label"))

    stray = sorted(set(flow.labeling) - set(ids))
    if stray:
        out.append(Violation("error", "unknown transition", f"labels for unknown transitions {stray}"))
    return out


def _unsafe_firings(flow: Flow, max_steps: int) -> list[Violation]:
    """Firings that would put a second token into a marked place (reachability sweep)."""
    out: list[Violation] = []
    frontier = [flow.initial_marking]
    seen = {flow.initial_marking}
    reported: set[str] = set()
    depth = 0
    while frontier and depth < max_steps:
        nxt_frontier = []
        for marking in frontier:
            for t in enabled(flow, marking):
                overlap = (t.postset - t.preset) & marking
                if overlap and t.id not in reported:
                    reported.add(t.id)
                    out.append(Violation(
                        "warning", "unsafe firing",
                        f"transition '{t.id}' marks already-marked places {sorted(overlap)}",
                    ))
                nxt = fire(flow, marking, t)
                if nxt not in seen:
                    seen.add(nxt)
                    nxt_frontier.append(nxt)
        frontier = nxt_frontier
        depth += 1
    return out


def validate_flow(flow: Flow, max_steps: int = 64) -> list[Violation]:
    """
    Check well-formedness of ``flow``.

    Returns a list of violations, empty when the flow is well formed, its
    executions can be enumerated within ``max_steps``, and every execution
    chains its events by causality. Violations are returned, never raised.
    """
    violations = _structural_violations(flow)
    if any(v.is_error for v in violations):
        return violations

    try:
        executions = enumerate_executions(flow, max_steps=max_steps)
    except UnboundedFlowError as exc:
        violations.append(Violation("error", "possibly unbounded flow", str(exc)))
        return violations

    if not executions:
        violations.append(Violation("warning", "no executions", "no firing sequence reaches the end marking"))

    for execution in executions:
        for i, (a, b) in enumerate(zip(execution.events, execution.events[1:])):
            if not causality_ok(a, b):
                violations.append(Violation(
                    "warning", "causality-inconsistent labeling",
                    f"execution {list(execution.firing)}: '{a}' then '{b}' at position {i}",
                ))
                break

    violations.extend(_unsafe_firings(flow, max_steps))
    return violations
