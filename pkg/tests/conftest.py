"""Shared fixtures: small hand-built flows, worked trace examples, the shipped library."""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

import pytest

from flowminer.flows import EventType, Flow, Transition, load_library
from flowminer.traces import EventInstance, Trace


def ev(src: str, dest: str, cmd: str) -> EventType:
    return EventType(src, dest, cmd)


def inst(etype: EventType, addr=None) -> EventInstance:
    return EventInstance(etype, addr)


def chain_flow(name: str, events: Sequence[EventType], addressed: bool = True) -> Flow:
    """Linear flow p0 -> t1 -> p1 -> ... -> p_end emitting ``events`` in order."""
    places = [f"p{i}" for i in range(len(events))] + ["p_end"]
    transitions = []
    labeling = {}
    for i, e in enumerate(events):
        tid = f"t{i + 1}"
        transitions.append(Transition(tid, {places[i]}, {places[i + 1]}))
        labeling[tid] = e
    return Flow(
        name=name,
        places=frozenset(places),
        transitions=tuple(transitions),
        labeling=labeling,
        initial_marking=frozenset({"p0"}),
        end_marking=frozenset({"p_end"}),
        addressed=addressed,
    )


# ── Events ────────────────────────────────────────────────────────────────────

@pytest.fixture
def e1():
    return ev("A", "B", "c1")


@pytest.fixture
def e2():
    return ev("B", "C", "c2")


@pytest.fixture
def e3():
    return ev("C", "D", "c3")


# ── Flows ─────────────────────────────────────────────────────────────────────

@pytest.fixture
def minimal_flow():
    return chain_flow("minimal", [ev("A", "B", "x")])


@pytest.fixture
def fork_flow():
    """Branching library flow: three executions of lengths 2, 4 and 8."""
    return load_library(names=["cpu_write"])[0]


@pytest.fixture(scope="session")
def library():
    return load_library()


@pytest.fixture(scope="session")
def periph_read():
    return load_library(names=["periph_read"])[0]


@pytest.fixture
def cycle_flow():
    """a: X->Y, b: Y->Z, c: Z->X as one linear execution."""
    return chain_flow("cycle", [ev("X", "Y", "a"), ev("Y", "Z", "b"), ev("Z", "X", "c")])


# ── Worked traces ─────────────────────────────────────────────────────────────

@pytest.fixture
def address_trace(e1, e2, e3):
    """({e1(10)}, {e2(10), e1(15)}, {e3(10), e2(15)}, {e1(15)})"""
    return Trace((
        (inst(e1, 10),),
        (inst(e2, 10), inst(e1, 15)),
        (inst(e3, 10), inst(e2, 15)),
        (inst(e1, 15),),
    ))


@pytest.fixture
def causality_events():
    """e0: A->B, e1: D->E, e2: B->C, e3: E->F"""
    return (ev("A", "B", "e0"), ev("D", "E", "e1"), ev("B", "C", "e2"), ev("E", "F", "e3"))


@pytest.fixture
def causality_trace(causality_events):
    return Trace.from_sequence(inst(e) for e in causality_events)


# ── Oracles ───────────────────────────────────────────────────────────────────

def brute_force_patterns(
    sequences: Sequence[Sequence[EventType]],
    vocab_events: Sequence[EventType],
    theta: float,
    max_len: int,
    causality: bool = False,
) -> set:
    """
    Every unique-event sequence of length 2..max_len whose extensions all have
    an empirical conditional >= theta (sliding-window counts), the last one
    emitted at theta.
    """
    def conditional(prefix: tuple, e: EventType) -> float | None:
        w = len(prefix) + 1
        total = 0
        hits = 0
        for seq in sequences:
            for i in range(len(seq) - w + 1):
                if tuple(seq[i:i + w - 1]) == prefix:
                    total += 1
                    hits += seq[i + w - 1] == e
        if total == 0:
            return None
        return hits / total

    out = set()
    for k in range(2, max_len + 1):
        for cand in permutations(vocab_events, k):
            ok = True
            for j in range(1, k):
                if causality and cand[j - 1].dest != cand[j].src:
                    ok = False
                    break
                p = conditional(tuple(cand[:j]), cand[j])
                if p is None or p < theta:
                    ok = False
                    break
            if ok:
                out.add(tuple(cand))
    return out
