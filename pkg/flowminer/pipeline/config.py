"""
config.py
=========
Pipeline configuration: one JSON file plus command-line overrides.

File layout (every section and field optional)::

    {
      "flows": ["library:periph_read", "my_flows/dma.json"],
      "simulation": {"initiators": [...], "instances_per_initiator": 100,
                     "delay_min": 1, "delay_max": 10, "address_pool": 16,
                     "n_traces": 20},
      "slicing": {"method": "causality", "addr_policy": "copy"},
      "seq_model": {"kind": "count", "hidden": 64, "epochs": 50, ...},
      "miner": {"theta": 0.2, "theta_prime": null, "max_len": 8,
                "filters": ["causality"], "initiating_mode": "seed"},
      "out": "out",
      "seed": 0
    }

Flow file paths are resolved relative to the config file.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from ..config.defaults import DEFAULT_CONFIG
from ..config.settings import settings
from ..errors import ConfigError
from ..flows.core import Flow
from ..flows.loaders import load_library, resolve_flow_ref
from ..mining.config import MinerParams
from ..seq_model.training import LstmHyperparameters
from ..simulation.config import Initiator, SimConfig, default_initiators, validate_timing
from ..slicing.core import ADDR_POLICIES, METHOD_ALIASES, SLICE_METHODS

PathLike = Union[str, Path]

_SIM = DEFAULT_CONFIG["SIMULATION"]
_SLICING = DEFAULT_CONFIG["SLICING"]
_SEQ = DEFAULT_CONFIG["SEQ_MODEL"]

MODEL_KINDS: tuple[str, ...] = ("count", "lstm")

_SECTIONS = {"flows", "simulation", "slicing", "seq_model", "miner", "out", "seed", "jobs"}
_SIM_FIELDS = {"initiators", "instances_per_initiator", "delay_min", "delay_max", "address_pool", "n_traces"}
_SLICING_FIELDS = {"method", "addr_policy"}


@dataclass(frozen=True)
class PipelineConfig:
    """
    Everything a pipeline run depends on.

    ``flows`` holds references (``library:<name>`` or file paths); an empty
    tuple selects the whole shipped library. Empty ``initiators`` derive one
    initiator per start component of the flows.
    """
    flows: tuple = ()
    initiators: tuple = ()
    instances_per_initiator: int = _SIM["instances_per_initiator"]
    delay_min: int = _SIM["delay_min"]
    delay_max: int = _SIM["delay_max"]
    address_pool: int = _SIM["address_pool"]
    n_traces: int = _SIM["n_traces"]
    slicing: str = _SLICING["method"]
    addr_policy: str = _SLICING["addr_policy"]
    model: str = _SEQ["kind"]
    seq_model: LstmHyperparameters = field(default_factory=LstmHyperparameters)
    miner: MinerParams = field(default_factory=MinerParams)
    out: str = "out"
    seed: int = 0
    jobs: int = settings.JOBS
    base_dir: Optional[Path] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "flows", tuple(self.flows))
        object.__setattr__(self, "initiators", tuple(
            i if isinstance(i, Initiator) else Initiator.from_dict(i) for i in self.initiators
        ))
        object.__setattr__(self, "slicing", METHOD_ALIASES.get(self.slicing, self.slicing))
        validate_timing(self.instances_per_initiator, self.delay_min, self.delay_max,
                        self.address_pool, self.seed)
        if self.n_traces < 1:
            raise ConfigError("n_traces", f"must be >= 1, got {self.n_traces}")
        if self.slicing not in SLICE_METHODS:
            raise ConfigError("slicing.method", f"must be one of {SLICE_METHODS}, got {self.slicing!r}")
        if self.addr_policy not in ADDR_POLICIES:
            raise ConfigError("slicing.addr_policy", f"must be one of {ADDR_POLICIES}, got {self.addr_policy!r}")
        if self.model not in MODEL_KINDS:
            raise ConfigError("seq_model.kind", f"must be one of {MODEL_KINDS}, got {self.model!r}")
        if self.jobs < 1:
            raise ConfigError("jobs", f"must be >= 1, got {self.jobs}")
        if not self.out:
            raise ConfigError("out", "output directory must not be empty")

    # ── derived objects ──

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    @property
    def max_len(self) -> int:
        return self.miner.max_len

    def load_flows(self) -> list[Flow]:
        if not self.flows:
            return load_library()
        flows = [resolve_flow_ref(ref, self.base_dir) for ref in self.flows]
        names = [f.name for f in flows]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ConfigError("flows", f"duplicate flow names {duplicates}")
        return flows

    def sim_config(self, flows: list[Flow]) -> SimConfig:
        return SimConfig(
            initiators=self.initiators or default_initiators(flows),
            instances_per_initiator=self.instances_per_initiator,
            delay_min=self.delay_min,
            delay_max=self.delay_max,
            seed=self.seed,
            address_pool=self.address_pool,
        )

    # ── serialization ──

    def to_dict(self) -> dict[str, Any]:
        seq_model = {"kind": self.model, **self.seq_model.to_dict()}
        return {
            "flows": list(self.flows),
            "simulation": {
                "initiators": [i.to_dict() for i in self.initiators],
                "instances_per_initiator": self.instances_per_initiator,
                "delay_min": self.delay_min,
                "delay_max": self.delay_max,
                "address_pool": self.address_pool,
                "n_traces": self.n_traces,
            },
            "slicing": {"method": self.slicing, "addr_policy": self.addr_policy},
            "seq_model": seq_model,
            "miner": self.miner.to_dict(),
            "out": self.out,
            "seed": self.seed,
            "jobs": self.jobs,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], base_dir: Optional[Path] = None) -> "PipelineConfig":
        unknown = set(d) - _SECTIONS
        if unknown:
            raise ConfigError("config", f"unknown sections {sorted(unknown)}")

        sim = dict(d.get("simulation", {}))
        bad = set(sim) - _SIM_FIELDS
        if bad:
            raise ConfigError("simulation", f"unknown fields {sorted(bad)}")
        slicing = dict(d.get("slicing", {}))
        bad = set(slicing) - _SLICING_FIELDS
        if bad:
            raise ConfigError("slicing", f"unknown fields {sorted(bad)}")
        seq = dict(d.get("seq_model", {}))
        kind = seq.pop("kind", _SEQ["kind"])

        kwargs: dict[str, Any] = dict(sim)
        if "method" in slicing:
            kwargs["slicing"] = slicing["method"]
        if "addr_policy" in slicing:
            kwargs["addr_policy"] = slicing["addr_policy"]
        for key in ("out", "seed", "jobs"):
            if key in d:
                kwargs[key] = d[key]
        try:
            return cls(
                flows=tuple(d.get("flows", ())),
                model=kind,
                seq_model=LstmHyperparameters.from_dict(seq),
                miner=MinerParams.from_dict(d.get("miner", {})),
                base_dir=base_dir,
                **kwargs,
            )
        except TypeError as exc:
            raise ConfigError("config", str(exc)) from exc

    def with_overrides(self, **overrides: Any) -> "PipelineConfig":
        """
        Copy with command-line overrides applied; ``None`` values are ignored.

        Accepted keys: the top-level fields plus ``theta``, ``theta_prime``,
        ``max_len``, ``filters``, ``hidden``, ``epochs`` and ``learning_rate``.
        """
        overrides = {k: v for k, v in overrides.items() if v is not None}
        miner_keys = {"theta", "theta_prime", "max_len", "filters"}
        seq_keys = {"hidden", "epochs", "learning_rate"}

        miner = self.miner
        miner_kw = {k: overrides.pop(k) for k in list(overrides) if k in miner_keys}
        if miner_kw:
            merged = {**miner.to_dict(), **miner_kw}
            if "theta" in miner_kw and "theta_prime" not in miner_kw and not miner.relaxed:
                merged["theta_prime"] = None
            miner = MinerParams.from_dict(merged)

        seq_kw = {k: overrides.pop(k) for k in list(overrides) if k in seq_keys}
        seq_model = replace(self.seq_model, **seq_kw) if seq_kw else self.seq_model

        if "flows" in overrides:
            overrides["flows"] = tuple(overrides["flows"])
            # flow paths given on the command line are relative to the working directory
            overrides["base_dir"] = None
        try:
            return replace(self, miner=miner, seq_model=seq_model, **overrides)
        except TypeError as exc:
            raise ConfigError("overrides", str(exc)) from exc

    def config_hash(self) -> str:
        """SHA-256 of the settings that determine the outputs."""
        d = self.to_dict()
        d.pop("jobs")
        d.pop("out")
        payload = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def load_config(path: Optional[PathLike] = None, **overrides: Any) -> PipelineConfig:
    """Read a config file (or start from defaults) and apply overrides."""
    if path is None:
        cfg = PipelineConfig()
    else:
        path = Path(path)
        if not path.exists():
            raise ConfigError("config", f"file not found: {path}")
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"{path} is not valid JSON: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config", f"{path} must contain a JSON object")
        cfg = PipelineConfig.from_dict(data, base_dir=path.resolve().parent)
    return cfg.with_overrides(**overrides)
