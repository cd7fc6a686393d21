"""
loaders.py
==========
Reading and writing flow definition files (JSON), and the shipped example
flow library.

File layout::

    {
      "name": "cpu_write",
      "addressed": true,
      "places": ["p0", "p1", ...],
      "transitions": [
        {"id": "t1", "preset": ["p0"], "postset": ["p1"],
         "event": {"src": "CPU0", "dest": "L2", "cmd": "WrReq"}},
        ...
      ],
      "initial": ["p0"],
      "final": ["p_end"]
    }
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Union

from ..config import settings
from ..errors import FlowError
from .core import EventType, Flow, Transition

PathLike = Union[str, Path]

_FLOW_FIELDS = {"name", "places", "transitions", "initial", "final", "addressed", "description"}
_TRANSITION_FIELDS = {"id", "preset", "postset", "event"}


def flow_from_dict(d: Mapping[str, Any]) -> Flow:
    """Build a ``Flow`` from the decoded JSON document."""
    unknown = set(d) - _FLOW_FIELDS
    if unknown:
        raise FlowError(f"unknown flow fields: {sorted(unknown)}")
    for key in ("name", "places", "transitions", "initial", "final"):
        if key not in d:
            raise FlowError(f"flow document is missing '{key}'")

    transitions = []
    labeling: dict[str, EventType] = {}
    for raw in d["transitions"]:
        unknown = set(raw) - _TRANSITION_FIELDS
        if unknown:
            raise FlowError(f"transition {raw.get('id')!r}: unknown fields {sorted(unknown)}")
        t = Transition(
            id=str(raw["id"]),
            preset=frozenset(raw.get("preset", ())),
            postset=frozenset(raw.get("postset", ())),
        )
        transitions.append(t)
        # An absent event leaves the transition unlabeled; validate_flow reports it.
        if raw.get("event") is not None:
            try:
                labeling[t.id] = EventType.from_dict(raw["event"])
            except (KeyError, ValueError, TypeError) as exc:
                raise FlowError(f"transition {t.id!r}: invalid event {raw['event']!r}") from exc

    return Flow(
        name=str(d["name"]),
        places=frozenset(d["places"]),
        transitions=tuple(transitions),
        labeling=labeling,
        initial_marking=frozenset(d["initial"]),
        end_marking=frozenset(d["final"]),
        addressed=bool(d.get("addressed", True)),
    )


def flow_to_dict(flow: Flow) -> dict[str, Any]:
    """Inverse of ``flow_from_dict`` (sorted place lists for stable output)."""
    return {
        "name": flow.name,
        "addressed": flow.addressed,
        "places": sorted(flow.places),
        "transitions": [
            {
                "id": t.id,
                "preset": sorted(t.preset),
                "postset": sorted(t.postset),
                "event": flow.labeling[t.id].to_dict() if t.id in flow.labeling else None,
            }
            for t in flow.transitions
        ],
        "initial": sorted(flow.initial_marking),
        "final": sorted(flow.end_marking),
    }


def load_flow(path: PathLike) -> Flow:
    """Load one flow definition file."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise FlowError(f"{path}: not valid JSON ({exc})") from exc
    return flow_from_dict(data)


def save_flow(flow: Flow, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(flow_to_dict(flow), f, indent=2)
        f.write("\n")


def library_flow_paths(version: Optional[str] = None) -> list[Path]:
    """Flow files of the shipped example library, sorted by file name."""
    directory = settings.library_dir(version)
    if not directory.is_dir():
        raise FlowError(f"flow library not found: {directory}")
    return sorted(directory.glob("*.json"))


def load_library(version: Optional[str] = None, names: Optional[Sequence[str]] = None) -> list[Flow]:
    """
    Load the example flow library.

    names : optional subset of flow names to return, in the given order.
    """
    flows = {flow.name: flow for flow in (load_flow(p) for p in library_flow_paths(version))}
    if names is None:
        return [flows[k] for k in sorted(flows)]
    missing = [n for n in names if n not in flows]
    if missing:
        raise FlowError(f"flows not in library: {missing}")
    return [flows[n] for n in names]


def describe_library(version: Optional[str] = None) -> dict[str, str]:
    """Human description of each library flow (``description`` field of the file)."""
    out = {}
    for path in library_flow_paths(version):
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        out[data["name"]] = data.get("description", "")
    return out


def resolve_flow_ref(ref: str, base_dir: Optional[Path] = None) -> Flow:
    """
    Resolve a flow reference from a pipeline config.

    ``library:<name>`` loads from the shipped library; anything else is a
    file path, relative to ``base_dir`` when not absolute.
    """
    if ref.startswith("library:"):
        return load_library(names=[ref.split(":", 1)[1]])[0]
    path = Path(ref)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    if not path.exists():
        raise FlowError(f"flow file not found: {path}")
    return load_flow(path)
