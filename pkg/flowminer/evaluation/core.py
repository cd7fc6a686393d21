"""
core.py
=======
Judge mined patterns against the executions of the flows.

A pattern is valid when its events appear, in the same order, as a
subsequence of some ground-truth execution. The countable set of valid
patterns of length ``k`` is every ``k``-subsequence with distinct events of
every execution, deduplicated across executions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence, Union

from ..config.defaults import DEFAULT_CONFIG
from ..errors import EvaluationError
from ..flows.core import EventType, Flow, enumerate_executions
from ..mining.core import Pattern
from ..utils.logging import get_logger
from .result import LengthRow, MiningReport

logger = get_logger(__name__)

_FLOWS = DEFAULT_CONFIG["FLOWS"]
_MAX_LEN = DEFAULT_CONFIG["MINER"]["max_len"]

PatternLike = Union[Pattern, Sequence[EventType]]


def _events(p: PatternLike) -> tuple:
    return p.events if isinstance(p, Pattern) else tuple(p)


def is_subsequence(seq: Sequence[EventType], execution: Sequence[EventType]) -> bool:
    """``seq`` occurs in ``execution`` in order (not necessarily contiguously)."""
    it = iter(execution)
    return all(any(e == x for x in it) for e in seq)


@dataclass(frozen=True)
class GroundTruth:
    """Executions of a flow set and, per length, the valid patterns they induce."""
    executions: tuple
    valid_universe: Mapping[int, frozenset] = field(default_factory=dict)
    max_len: int = _MAX_LEN

    @classmethod
    def from_executions(
        cls,
        executions: Iterable[Sequence[EventType]],
        max_len: int = _MAX_LEN,
        max_execution_length: int = _FLOWS["max_execution_length"],
    ) -> "GroundTruth":
        if max_len < 2:
            raise EvaluationError(f"max_len must be >= 2, got {max_len}")
        unique: dict[tuple, None] = {}
        for execution in executions:
            unique.setdefault(tuple(execution), None)

        universe: dict[int, set] = {k: set() for k in range(2, max_len + 1)}
        for execution in unique:
            if len(execution) > max_execution_length:
                raise EvaluationError(
                    f"execution of length {len(execution)} exceeds the enumeration guard "
                    f"of {max_execution_length} events"
                )
            for k in range(2, min(max_len, len(execution)) + 1):
                for combo in combinations(execution, k):
                    if len(set(combo)) == k:
                        universe[k].add(combo)

        return cls(
            executions=tuple(unique),
            valid_universe={k: frozenset(v) for k, v in universe.items()},
            max_len=max_len,
        )

    def universe(self, k: int) -> frozenset:
        return self.valid_universe.get(k, frozenset())

    def is_valid(self, p: PatternLike) -> bool:
        return is_valid(p, self)

    def __repr__(self) -> str:
        sizes = {k: len(v) for k, v in sorted(self.valid_universe.items())}
        return f"GroundTruth(executions={len(self.executions)}, universe={sizes})"


def build_ground_truth(
    flows: Sequence[Flow],
    max_steps: int = _FLOWS["max_steps"],
    max_len: int = _MAX_LEN,
) -> GroundTruth:
    """Enumerate every flow's executions and materialize the valid universe up to ``max_len``."""
    executions = [ex.events for flow in flows for ex in enumerate_executions(flow, max_steps=max_steps)]
    gt = GroundTruth.from_executions(executions, max_len=max_len)
    logger.info("ground truth: %r", gt)
    return gt


def is_valid(p: PatternLike, gt: GroundTruth) -> bool:
    """``p`` is an order-preserving subsequence of at least one execution."""
    events = _events(p)
    if 2 <= len(events) <= gt.max_len:
        return events in gt.universe(len(events))
    return any(is_subsequence(events, execution) for execution in gt.executions)


def classify(
    mined: Iterable[PatternLike],
    gt: GroundTruth,
    max_len: Optional[int] = None,
) -> MiningReport:
    """
    Count, per length ``k``: valid and found, invalid and found, valid and not found.

    Mined patterns longer than ``max_len`` (default: the ground truth's) are
    ignored.
    """
    W = gt.max_len if max_len is None else max_len
    if W > gt.max_len:
        raise EvaluationError(f"ground truth was built up to length {gt.max_len}, cannot classify length {W}")

    by_length: dict[int, set] = {k: set() for k in range(2, W + 1)}
    skipped = 0
    for p in mined:
        events = _events(p)
        if len(events) in by_length:
            by_length[len(events)].add(events)
        else:
            skipped += 1
    if skipped:
        logger.warning("%d mined patterns fall outside lengths 2..%d and were not classified", skipped, W)

    rows = []
    for k in range(2, W + 1):
        universe = gt.universe(k)
        found = by_length[k]
        valid_found = found & universe
        rows.append(LengthRow(
            length=k,
            valid_found=sorted(valid_found),
            invalid_found=sorted(found - universe),
            valid_not_found=sorted(universe - found),
        ))
    return MiningReport(rows)
