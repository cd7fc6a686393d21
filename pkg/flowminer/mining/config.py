"""Parameters of the chained pattern extraction."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Iterable, Mapping, Optional

from ..config.defaults import DEFAULT_CONFIG
from ..errors import ConfigError

_MINER = DEFAULT_CONFIG["MINER"]

FILTERS: tuple[str, ...] = ("causality", "initiating")
INITIATING_MODES: tuple[str, ...] = ("seed", "post")


@dataclass(frozen=True)
class MinerParams:
    """
    theta            : an extension is emitted as a pattern when ``P(e|S) >= theta``.
    theta_prime      : an extension is kept as a candidate prefix when
                       ``P(e|S) >= theta_prime``; ``None`` means ``theta``.
    max_len          : longest pattern mined (W).
    causality_filter : extend ``S`` with ``e`` only if ``last(S).dest == e.src``.
    initiating_filter: keep only patterns starting with an initiating event,
                       applied to the seeds (``initiating_mode='seed'``) or to
                       the final set (``'post'``).
    """
    theta: float = _MINER["theta"]
    theta_prime: Optional[float] = _MINER["theta_prime"]
    max_len: int = _MINER["max_len"]
    causality_filter: bool = False
    initiating_filter: bool = False
    initiating_mode: str = _MINER["initiating_mode"]

    def __post_init__(self):
        if self.theta_prime is None:
            object.__setattr__(self, "theta_prime", self.theta)
        if not 0 < self.theta <= 1:
            raise ConfigError("miner.theta", f"must be in (0, 1], got {self.theta}")
        if not 0 < self.theta_prime <= self.theta:
            raise ConfigError(
                "miner.theta_prime",
                f"must be in (0, theta={self.theta}], got {self.theta_prime}",
            )
        if self.max_len < 2:
            raise ConfigError("miner.max_len", f"must be >= 2, got {self.max_len}")
        if self.initiating_mode not in INITIATING_MODES:
            raise ConfigError(
                "miner.initiating_mode",
                f"must be one of {INITIATING_MODES}, got {self.initiating_mode!r}",
            )

    @property
    def relaxed(self) -> bool:
        return self.theta_prime < self.theta

    @property
    def filters(self) -> tuple[str, ...]:
        out = []
        if self.causality_filter:
            out.append("causality")
        if self.initiating_filter:
            out.append("initiating")
        return tuple(out)

    def with_theta(self, theta: float) -> "MinerParams":
        """Same parameters at another ``theta``; a relaxed ``theta_prime`` is kept (capped at ``theta``)."""
        theta_prime = min(self.theta_prime, theta) if self.relaxed else theta
        return replace(self, theta=theta, theta_prime=theta_prime)

    def to_dict(self) -> dict[str, Any]:
        return {
            "theta": self.theta,
            "theta_prime": self.theta_prime,
            "max_len": self.max_len,
            "filters": list(self.filters),
            "initiating_mode": self.initiating_mode,
        }

    @classmethod
    def from_filters(
        cls,
        filters: Iterable[str] = (),
        **kwargs: Any,
    ) -> "MinerParams":
        filters = tuple(filters)
        unknown = [f for f in filters if f not in FILTERS]
        if unknown:
            raise ConfigError("miner.filters", f"unknown filters {unknown} (expected any of {FILTERS})")
        return cls(causality_filter="causality" in filters, initiating_filter="initiating" in filters, **kwargs)

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "MinerParams":
        d = dict(d)
        filters = d.pop("filters", ())
        allowed = {"theta", "theta_prime", "max_len", "initiating_mode"}
        unknown = set(d) - allowed
        if unknown:
            raise ConfigError("miner", f"unknown fields {sorted(unknown)}")
        return cls.from_filters(filters, **d)
