"""
engine.py
=========
Cycle-stepped simulator of concurrent flow instances.

Every initiator runs its instances one after another. An instance picks its
flow uniformly among the initiator's flows, one address from the pool, and one
of the flow's executions uniformly; it then fires one transition per cycle
until the execution completes. Events emitted by different instances in the
same cycle share a timestep. Cycles without events produce no timestep.

The generator is numpy's ``default_rng`` (PCG64); per-trace seeds of a corpus
are spawned from the global seed with ``SeedSequence``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from ..config.defaults import DEFAULT_CONFIG
from ..errors import FlowValidationError, InvariantViolation, SimulationError, TransitionNotEnabledError
from ..flows.core import Execution, Flow, enumerate_executions, fire, validate_flow
from ..traces.core import EventInstance, Trace
from ..utils.logging import get_logger
from .config import SimConfig
from .result import ProvenanceRecord, SimulationResult

logger = get_logger(__name__)

_MAX_STEPS = DEFAULT_CONFIG["FLOWS"]["max_steps"]


@dataclass
class _Instance:
    id: int
    flow: Flow
    addr: Optional[int]
    execution: Execution
    marking: frozenset
    pos: int = 0

    @property
    def done(self) -> bool:
        return self.pos >= len(self.execution.firing)


@dataclass
class _InitiatorState:
    flows: tuple
    remaining: int
    next_start: int
    active: Optional[_Instance] = None


def ground_truth(flows: Sequence[Flow], max_steps: int = _MAX_STEPS) -> dict[str, list[Execution]]:
    """Executions of every flow, keyed by flow name."""
    return {flow.name: enumerate_executions(flow, max_steps=max_steps) for flow in flows}


def _check_flows(flows: Sequence[Flow], cfg: SimConfig, max_steps: int) -> dict[str, list[Execution]]:
    if not flows:
        raise SimulationError("cannot simulate an empty flow set")
    by_name = {flow.name: flow for flow in flows}
    for flow in flows:
        violations = validate_flow(flow, max_steps=max_steps)
        errors = [v for v in violations if v.is_error]
        if errors:
            raise FlowValidationError(flow.name, errors)
        for v in violations:
            logger.warning("flow %s: %s", flow.name, v)

    for initiator in cfg.initiators:
        unknown = [name for name in initiator.flows if name not in by_name]
        if unknown:
            raise SimulationError(f"initiator '{initiator.component}' references unknown flows {unknown}")

    executions = ground_truth(flows, max_steps=max_steps)
    empty = [name for name, execs in executions.items() if not execs]
    if empty:
        raise SimulationError(f"flows without executions cannot be simulated: {empty}")
    return executions


def simulate(flows: Sequence[Flow], cfg: SimConfig, max_steps: int = _MAX_STEPS) -> SimulationResult:
    """
    Run ``cfg.instances_per_initiator`` instances per initiator concurrently.

    Returns the trace together with a provenance record for every emitted
    event. Identical ``(flows, cfg)`` give identical results.
    """
    executions = _check_flows(flows, cfg, max_steps)
    by_name = {flow.name: flow for flow in flows}
    rng = np.random.default_rng(cfg.seed)

    def _delay() -> int:
        return int(rng.integers(cfg.delay_min, cfg.delay_max + 1))

    states = [
        _InitiatorState(flows=initiator.flows, remaining=cfg.instances_per_initiator, next_start=_delay())
        for initiator in cfg.initiators
    ]

    cycles: list[list[tuple[EventInstance, int, str]]] = []
    next_id = 0
    cycle = 0
    while any(st.remaining > 0 or st.active is not None for st in states):
        emitted: list[tuple[EventInstance, int, str]] = []
        for st in states:
            if st.active is None and st.remaining > 0 and cycle >= st.next_start:
                flow = by_name[st.flows[int(rng.integers(len(st.flows)))]]
                addr = int(rng.integers(cfg.address_pool))
                candidates = executions[flow.name]
                execution = candidates[int(rng.integers(len(candidates)))]
                st.active = _Instance(
                    id=next_id,
                    flow=flow,
                    addr=addr if flow.addressed else None,
                    execution=execution,
                    marking=flow.initial_marking,
                )
                st.remaining -= 1
                next_id += 1

            inst = st.active
            if inst is None:
                continue
            t = inst.flow.transition(inst.execution.firing[inst.pos])
            try:
                inst.marking = fire(inst.flow, inst.marking, t)
            except TransitionNotEnabledError as exc:
                raise InvariantViolation(
                    f"instance {inst.id} of '{inst.flow.name}' cannot replay its execution: {exc}"
                ) from exc
            emitted.append((EventInstance(inst.flow.labeling[t.id], inst.addr), inst.id, inst.flow.name))
            inst.pos += 1
            if inst.done:
                st.active = None
                st.next_start = cycle + _delay()
        if emitted:
            cycles.append(emitted)
        cycle += 1

    steps = []
    provenance: list[ProvenanceRecord] = []
    for step_no, emitted in enumerate(cycles):
        emitted.sort(key=lambda item: (item[0].sort_key, item[1]))
        steps.append(tuple(e for e, _, _ in emitted))
        provenance.extend(ProvenanceRecord(step_no, e, iid, name) for e, iid, name in emitted)

    result = SimulationResult(trace=Trace(tuple(steps)), provenance=provenance, seed=cfg.seed)
    logger.debug(
        "simulated %d instances over %d cycles: %d steps, %d events",
        next_id, cycle, len(result.trace), result.trace.n_events,
    )
    return result


def spawn_seeds(seed: int, n: int) -> list[int]:
    """``n`` independent 64-bit seeds derived from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def simulate_corpus(
    flows: Sequence[Flow],
    cfg: SimConfig,
    n_traces: int,
    max_steps: int = _MAX_STEPS,
) -> list[SimulationResult]:
    """Simulate ``n_traces`` traces, each with its own seed spawned from ``cfg.seed``."""
    if n_traces < 1:
        raise SimulationError(f"n_traces must be >= 1, got {n_traces}")
    results = []
    for i, seed in enumerate(spawn_seeds(cfg.seed, n_traces)):
        results.append(simulate(flows, cfg.with_seed(seed), max_steps=max_steps))
        logger.debug("trace %d/%d simulated", i + 1, n_traces)
    logger.info("simulated %d traces (%d instances each)", n_traces, cfg.total_instances)
    return results


def start_events(executions: Mapping[str, Sequence[Execution]]) -> set:
    """First events of every execution: the event types a flow can start with."""
    return {execution.events[0] for execs in executions.values() for execution in execs}
