"""Configuration for the concurrent flow simulator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from ..config.defaults import DEFAULT_CONFIG
from ..errors import ConfigError
from ..flows.core import enumerate_executions

_SIM = DEFAULT_CONFIG["SIMULATION"]


@dataclass(frozen=True)
class Initiator:
    """A component that launches instances of the listed flows, one at a time."""
    component: str
    flows: tuple

    def __post_init__(self):
        object.__setattr__(self, "flows", tuple(self.flows))
        if not self.component:
            raise ConfigError("initiators.component", "must be a non-empty component id")
        if not self.flows:
            raise ConfigError("initiators.flows", f"initiator '{self.component}' has no flows")

    def to_dict(self) -> dict[str, Any]:
        return {"component": self.component, "flows": list(self.flows)}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Initiator":
        return cls(component=str(d["component"]), flows=tuple(d["flows"]))


def validate_timing(
    instances_per_initiator: int,
    delay_min: int,
    delay_max: int,
    address_pool: int,
    seed: int,
) -> None:
    """Checks shared by ``SimConfig`` and the pipeline configuration."""
    if instances_per_initiator < 1:
        raise ConfigError("instances_per_initiator", f"must be >= 1, got {instances_per_initiator}")
    if delay_min < 1:
        raise ConfigError("delay_min", f"must be >= 1, got {delay_min}")
    if delay_max < delay_min:
        raise ConfigError("delay_max", f"must be >= delay_min ({delay_min}), got {delay_max}")
    if address_pool < 1:
        raise ConfigError("address_pool", f"must be >= 1, got {address_pool}")
    if not 0 <= int(seed) < 2**64:
        raise ConfigError("seed", f"must be a 64-bit unsigned integer, got {seed}")


@dataclass(frozen=True)
class SimConfig:
    """
    Simulation parameters.

    Each initiator sequentially launches ``instances_per_initiator`` instances,
    waiting a uniform random delay in ``[delay_min, delay_max]`` cycles before
    each launch. Every instance draws one address from ``range(address_pool)``.
    """
    initiators: tuple
    instances_per_initiator: int = _SIM["instances_per_initiator"]
    delay_min: int = _SIM["delay_min"]
    delay_max: int = _SIM["delay_max"]
    seed: int = 0
    address_pool: int = _SIM["address_pool"]

    def __post_init__(self):
        object.__setattr__(self, "initiators", tuple(
            i if isinstance(i, Initiator) else Initiator.from_dict(i) for i in self.initiators
        ))
        if not self.initiators:
            raise ConfigError("initiators", "at least one initiator is required")
        validate_timing(
            self.instances_per_initiator, self.delay_min, self.delay_max, self.address_pool, self.seed
        )

    @property
    def total_instances(self) -> int:
        return self.instances_per_initiator * len(self.initiators)

    def with_seed(self, seed: int) -> "SimConfig":
        return SimConfig(
            initiators=self.initiators,
            instances_per_initiator=self.instances_per_initiator,
            delay_min=self.delay_min,
            delay_max=self.delay_max,
            seed=seed,
            address_pool=self.address_pool,
        )


def default_initiators(flows: Sequence[Any]) -> tuple[Initiator, ...]:
    """
    One initiator per distinct source of the flows' start events, each
    allowed to start the flows that begin at it.
    """
    by_component: dict[str, list[str]] = {}
    for flow in flows:
        starts = {execution.events[0].src for execution in enumerate_executions(flow)}
        for component in sorted(starts):
            by_component.setdefault(component, []).append(flow.name)
    return tuple(Initiator(c, tuple(names)) for c, names in sorted(by_component.items()))
