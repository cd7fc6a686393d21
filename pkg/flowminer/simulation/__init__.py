"""
Concurrent flow simulator producing traces with per-event provenance.

Typical usage::

    from flowminer.flows import load_library
    from flowminer.simulation import SimConfig, simulate, default_initiators

    flows = load_library()
    cfg = SimConfig(initiators=default_initiators(flows), seed=7)
    result = simulate(flows, cfg)
    print(result)
"""

from .config import Initiator, SimConfig, default_initiators, validate_timing
from .engine import ground_truth, simulate, simulate_corpus, spawn_seeds, start_events
from .result import ProvenanceRecord, SimulationResult, save_provenance, write_provenance

__all__ = [
    "Initiator",
    "SimConfig",
    "default_initiators",
    "validate_timing",
    "ground_truth",
    "simulate",
    "simulate_corpus",
    "spawn_seeds",
    "start_events",
    "ProvenanceRecord",
    "SimulationResult",
    "save_provenance",
    "write_provenance",
]
