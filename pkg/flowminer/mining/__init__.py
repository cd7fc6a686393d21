"""
Sequential pattern extraction by chaining per-length models.

Typical usage::

    from flowminer.mining import MinerParams, mine

    params = MinerParams(theta=0.5, max_len=4, causality_filter=True)
    for pattern in mine(models, vocab, params):
        print(pattern)
"""

from ..flows.core import causality_ok
from .config import FILTERS, INITIATING_MODES, MinerParams
from .core import (
    DEFAULT_SWEEP,
    Pattern,
    detect_initiating_events,
    merge_patterns,
    mine,
    sweep_thresholds,
)
from .io import load_patterns, save_patterns

__all__ = [
    "causality_ok",
    "FILTERS",
    "INITIATING_MODES",
    "MinerParams",
    "DEFAULT_SWEEP",
    "Pattern",
    "detect_initiating_events",
    "merge_patterns",
    "mine",
    "sweep_thresholds",
    "load_patterns",
    "save_patterns",
]
