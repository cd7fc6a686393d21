"""
flows
=====
System flows as labeled Petri nets and their executions (the ground truth).

Typical usage::
    from flowminer.flows import load_library, enumerate_executions

    for flow in load_library():
        print(flow.name, len(enumerate_executions(flow)))
"""

from .core import (
    EventType,
    Execution,
    Flow,
    Marking,
    Transition,
    Violation,
    causality_ok,
    enabled,
    enumerate_executions,
    enumerate_firings,
    fire,
    validate_flow,
)
from .loaders import (
    describe_library,
    flow_from_dict,
    flow_to_dict,
    library_flow_paths,
    load_flow,
    load_library,
    resolve_flow_ref,
    save_flow,
)

__all__ = [
    "EventType",
    "Execution",
    "Flow",
    "Marking",
    "Transition",
    "Violation",
    "causality_ok",
    "enabled",
    "enumerate_executions",
    "enumerate_firings",
    "fire",
    "validate_flow",
    "describe_library",
    "flow_from_dict",
    "flow_to_dict",
    "library_flow_paths",
    "load_flow",
    "load_library",
    "resolve_flow_ref",
    "save_flow",
]
