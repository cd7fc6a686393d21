"""Sliced corpus on disk: one trace file per sub-trace plus ``index.json``."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence, Union

from ..errors import SlicingError
from ..traces.core import Trace
from ..traces.io import load_trace, save_trace
from .core import SubTrace

PathLike = Union[str, Path]

INDEX_FILE = "index.json"


def save_sliced(
    slices: Sequence[Sequence[SubTrace]],
    directory: PathLike,
    method: str,
    sources: Sequence[str] = (),
) -> list[dict]:
    """
    Write ``slices`` (one list per source trace) under ``directory``.

    Sub-trace files are named ``sub_TTTT_KKKK.jsonl`` (source trace, slice
    number) and hold one event per line. Returns the index entries.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for stale in directory.glob("sub_*.jsonl"):
        stale.unlink()

    entries = []
    for t, subtraces in enumerate(slices):
        for k, sub in enumerate(subtraces):
            name = f"sub_{t:04d}_{k:04d}.jsonl"
            save_trace(sub.to_trace(), directory / name)
            entry = {"file": name, "method": method, "key": sub.key}
            if sources:
                entry["source"] = sources[t]
            entries.append(entry)

    with open(directory / INDEX_FILE, "w", encoding="utf-8") as f:
        json.dump(entries, f, indent=1)
        f.write("\n")
    return entries


def load_index(directory: PathLike) -> list[dict]:
    path = Path(directory) / INDEX_FILE
    if not path.exists():
        raise SlicingError(f"slice index not found: {path}")
    try:
        with open(path, encoding="utf-8") as f:
            entries = json.load(f)
    except json.JSONDecodeError as exc:
        raise SlicingError(f"slice index {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(entries, list) or any("file" not in e for e in entries):
        raise SlicingError(f"slice index {path} must be a list of {{file, method, key}} entries")
    return entries


def load_sliced(directory: PathLike) -> list[Trace]:
    """Sub-traces listed in the index, in index order."""
    directory = Path(directory)
    return [load_trace(directory / entry["file"]) for entry in load_index(directory)]
