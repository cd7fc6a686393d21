"""Trace data model, JSON Lines codec and vocabulary construction."""

from .core import (
    EventInstance,
    Trace,
    Vocabulary,
    build_vocabulary,
    canonical_step,
    linearize,
)
from .io import (
    load_trace,
    load_vocabulary,
    read_trace,
    save_trace,
    save_vocabulary,
    write_trace,
)

__all__ = [
    "EventInstance",
    "Trace",
    "Vocabulary",
    "build_vocabulary",
    "canonical_step",
    "linearize",
    "load_trace",
    "load_vocabulary",
    "read_trace",
    "save_trace",
    "save_vocabulary",
    "write_trace",
]
