from itertools import combinations, permutations

import pandas as pd
import pytest

from conftest import ev

from flowminer.errors import EvaluationError
from flowminer.evaluation import (
    COLUMNS,
    GroundTruth,
    MiningReport,
    build_ground_truth,
    classify,
    compare_reports,
    is_subsequence,
    is_valid,
)
from flowminer.flows import load_library
from flowminer.mining import Pattern


def n(i: int):
    return ev("S", "D", str(i))


def seq(*ids):
    return tuple(n(i) for i in ids)


A, B, C, D = n(1), n(2), n(3), n(4)


@pytest.fixture
def abc_truth():
    return GroundTruth.from_executions([(A, B, C)], max_len=3)


@pytest.fixture(scope="module")
def cpu_write_truth():
    return build_ground_truth(load_library(names=["cpu_write"]), max_len=8)


def pairwise_ordered(p, execution) -> bool:
    """Every event of ``p`` occurs in ``execution`` and each pair keeps its order."""
    if not set(p) <= set(execution):
        return False
    return all(execution.index(a) < execution.index(b) for a, b in combinations(p, 2))


class TestValidity:
    def test_subsequence_example(self):
        execution = seq(0, 8, 12, 13, 15, 23, 24, 25)
        assert is_subsequence(seq(0, 13, 15, 23), execution)
        assert not is_subsequence(seq(13, 0), execution)

    def test_against_ground_truth(self):
        gt = GroundTruth.from_executions([seq(0, 8, 12, 13, 15, 23, 24, 25)], max_len=8)
        assert is_valid(seq(0, 13, 15, 23), gt)
        assert is_valid(Pattern(seq(0, 13, 15, 23)), gt)
        assert not is_valid(seq(13, 0), gt)
        assert gt.is_valid(seq(0, 8, 12, 13, 15, 23, 24, 25))

    def test_longer_than_universe_falls_back(self):
        gt = GroundTruth.from_executions([seq(1, 2, 3, 4, 5)], max_len=2)
        assert is_valid(seq(1, 3, 5), gt)
        assert not is_valid(seq(5, 3, 1), gt)

    def test_sub_selections_of_valid_patterns_are_valid(self, cpu_write_truth):
        gt = cpu_write_truth
        for k in range(2, gt.max_len + 1):
            for p in gt.universe(k):
                for j in range(2, k):
                    for q in combinations(p, j):
                        assert is_valid(q, gt)

    def test_matches_pairwise_order(self, cpu_write_truth):
        gt = cpu_write_truth
        assert all(len(set(ex)) == len(ex) for ex in gt.executions)
        events = sorted({e for ex in gt.executions for e in ex})
        candidates = list(permutations(events, 2)) + list(permutations(events[:6], 3))
        for p in candidates:
            expected = any(pairwise_ordered(p, ex) for ex in gt.executions)
            assert is_valid(p, gt) == expected, p


class TestUniverse:
    def test_single_execution(self, abc_truth):
        assert abc_truth.universe(2) == {(A, B), (A, C), (B, C)}
        assert abc_truth.universe(3) == {(A, B, C)}

    def test_single_event_execution_contributes_nothing(self):
        gt = GroundTruth.from_executions([(A,)], max_len=3)
        assert gt.universe(2) == frozenset()

    def test_shared_prefix_counted_once(self):
        gt = GroundTruth.from_executions([(A, B, C), (A, B, D)], max_len=3)
        assert len(gt.universe(2)) == 5
        assert gt.universe(3) == {(A, B, C), (A, B, D)}

    def test_repeated_events_excluded(self):
        gt = GroundTruth.from_executions([(A, B, A)], max_len=3)
        assert gt.universe(2) == {(A, B), (B, A)}
        assert gt.universe(3) == frozenset()

    def test_duplicate_executions_collapse(self):
        gt = GroundTruth.from_executions([(A, B), (A, B)], max_len=2)
        assert gt.executions == ((A, B),)

    def test_execution_length_guard(self):
        with pytest.raises(EvaluationError):
            GroundTruth.from_executions([seq(*range(17))], max_len=3)

    def test_library_ground_truth(self, fork_flow):
        gt = build_ground_truth([fork_flow], max_len=8)
        assert len(gt.executions) == 3
        longest = max(gt.executions, key=len)
        assert longest in gt.universe(8)


class TestClassify:
    def test_single_pattern(self, abc_truth):
        report = classify([Pattern((A, B))], abc_truth)
        assert report.row(2).counts == (1, 0, 2)
        assert report.row(3).counts == (0, 0, 1)

    def test_nothing_mined(self, abc_truth):
        report = classify([], abc_truth)
        assert [r.counts for r in report.rows] == [(0, 0, 3), (0, 0, 1)]

    def test_entire_universe_mined(self, abc_truth):
        report = classify(abc_truth.universe(2), abc_truth)
        assert report.row(2).counts == (3, 0, 0)

    def test_invalid_and_found(self, abc_truth):
        report = classify([(B, A), (A, C)], abc_truth)
        assert report.row(2).invalid_found == [(B, A)]
        assert report.row(2).valid_found == [(A, C)]

    def test_accounting_identities(self, fork_flow):
        gt = build_ground_truth([fork_flow], max_len=4)
        events = sorted({e for ex in gt.executions for e in ex})[:5]
        mined = [p for k in (2, 3) for p in permutations(events, k)]
        report = classify(mined, gt)
        for row in report.rows:
            found = {p for p in mined if len(p) == row.length}
            assert len(row.valid_found) + len(row.invalid_found) == len(found)
            assert len(row.valid_found) + len(row.valid_not_found) == len(gt.universe(row.length))

    def test_matches_pairwise_order_brute_force(self, fork_flow):
        gt = build_ground_truth([fork_flow], max_len=3)
        events = sorted({e for ex in gt.executions for e in ex})
        mined = list(permutations(events, 2)) + list(permutations(events[:5], 3))
        report = classify(mined, gt)
        for row in report.rows:
            for p in row.valid_found:
                assert any(pairwise_ordered(p, ex) for ex in gt.executions)
            for p in row.invalid_found:
                assert not any(pairwise_ordered(p, ex) for ex in gt.executions)

    def test_out_of_range_patterns_ignored(self, abc_truth):
        report = classify([(A, B, C, D)], abc_truth)
        assert report.totals() == {"V_F": 0, "IV_F": 0, "V_NF": 4}

    def test_max_len_beyond_ground_truth(self, abc_truth):
        with pytest.raises(EvaluationError):
            classify([], abc_truth, max_len=4)


class TestReport:
    def test_dataframe_and_csv(self, tmp_path, abc_truth):
        report = classify([(A, B), (B, A)], abc_truth)
        df = report.to_dataframe()
        assert list(df.columns) == COLUMNS
        assert df.to_dict("records")[0] == {"length": 2, "V_F": 1, "IV_F": 1, "V_NF": 2}
        report.to_csv(tmp_path / "r.csv")
        assert (tmp_path / "r.csv").read_text() == "length,V_F,IV_F,V_NF\n2,1,1,2\n3,0,0,1\n"
        pd.testing.assert_frame_equal(pd.read_csv(tmp_path / "r.csv"), df)

    def test_summary_has_totals(self, abc_truth):
        text = classify([(A, B)], abc_truth).summary()
        assert "total" in text.splitlines()[-1]

    def test_unknown_row(self):
        with pytest.raises(KeyError):
            MiningReport([]).row(2)

    def test_compare(self, abc_truth):
        before = classify([(A, B)], abc_truth)
        after = classify([(A, B), (A, C), (A, B, C)], abc_truth)
        diff = compare_reports(before, after, labels=("unsliced", "sliced"))
        assert list(diff["V_F_delta"]) == [1, 1]
        assert list(diff["V_NF_sliced"]) == [1, 0]
