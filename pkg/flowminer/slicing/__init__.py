"""
Trace slicing by address and by causality chaining.

Typical usage::

    from flowminer.slicing import slice_trace

    for sub in slice_trace(trace, method="causality"):
        print(sub.key, [str(e) for e in sub.events])
"""

from .core import (
    ADDR_POLICIES,
    SLICE_METHODS,
    SubTrace,
    address_slice,
    causality_slice,
    slice_trace,
    slice_traces,
)
from .io import load_index, load_sliced, save_sliced

__all__ = [
    "ADDR_POLICIES",
    "SLICE_METHODS",
    "SubTrace",
    "address_slice",
    "causality_slice",
    "slice_trace",
    "slice_traces",
    "load_index",
    "load_sliced",
    "save_sliced",
]
