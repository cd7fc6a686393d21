"""Simulation output: the trace plus its per-event provenance log."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Union

import pandas as pd

from ..flows.core import EventType
from ..traces.core import EventInstance, Trace

PathLike = Union[str, Path]


@dataclass(frozen=True)
class ProvenanceRecord:
    """Which instance (and flow) emitted an event at a given trace step."""
    step: int
    event: EventInstance
    instance: int
    flow: str

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "event": self.event.to_dict(),
            "instance": self.instance,
            "flow": self.flow,
        }


@dataclass
class SimulationResult:
    """Outputs of ``simulate``."""
    trace: Trace
    provenance: list = field(default_factory=list)
    seed: int = 0

    @property
    def instance_ids(self) -> list[int]:
        return sorted({r.instance for r in self.provenance})

    def instance_flow(self, instance_id: int) -> str:
        for r in self.provenance:
            if r.instance == instance_id:
                return r.flow
        raise KeyError(f"unknown instance {instance_id}")

    def project_instance(self, instance_id: int) -> tuple[EventType, ...]:
        """Event sequence emitted by one instance, in trace order."""
        return tuple(r.event.etype for r in self.provenance if r.instance == instance_id)

    def to_dataframe(self) -> pd.DataFrame:
        """Provenance log as a DataFrame (one row per emitted event)."""
        rows = [
            {
                "step": r.step,
                "src": r.event.src,
                "dest": r.event.dest,
                "cmd": r.event.etype.cmd,
                "addr": r.event.addr,
                "instance": r.instance,
                "flow": r.flow,
            }
            for r in self.provenance
        ]
        return pd.DataFrame(rows, columns=["step", "src", "dest", "cmd", "addr", "instance", "flow"])

    def __repr__(self) -> str:
        return (
            f"SimulationResult(steps={len(self.trace)}, events={self.trace.n_events}, "
            f"instances={len(self.instance_ids)}, seed={self.seed})"
        )


def write_provenance(records: list, sink: IO[bytes]) -> None:
    """Provenance sidecar: JSON Lines of ``{"step", "event", "instance", "flow"}``."""
    for r in records:
        sink.write((json.dumps(r.to_dict(), separators=(",", ":")) + "\n").encode("utf-8"))


def save_provenance(records: list, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        write_provenance(records, f)
