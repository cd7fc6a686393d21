"""
Evaluation of mined patterns against flow executions.

Typical usage::

    from flowminer.evaluation import build_ground_truth, classify

    gt = build_ground_truth(flows, max_len=8)
    report = classify(patterns, gt)
    print(report.summary())
"""

from .core import GroundTruth, build_ground_truth, classify, is_subsequence, is_valid
from .result import COLUMNS, LengthRow, MiningReport, compare_reports

__all__ = [
    "GroundTruth",
    "build_ground_truth",
    "classify",
    "is_subsequence",
    "is_valid",
    "COLUMNS",
    "LengthRow",
    "MiningReport",
    "compare_reports",
]
