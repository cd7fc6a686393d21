from collections import Counter

import pytest

from conftest import ev, inst

from flowminer.errors import SlicingError
from flowminer.flows import causality_ok
from flowminer.simulation import SimConfig, default_initiators, simulate
from flowminer.slicing import (
    address_slice,
    causality_slice,
    load_index,
    load_sliced,
    save_sliced,
    slice_trace,
    slice_traces,
)
from flowminer.traces import Trace


def _etypes(sub):
    return tuple(e.etype for e in sub.events)


def _is_projection(sub, trace):
    flat = trace.instances()
    return (
        list(sub.positions) == sorted(sub.positions)
        and all(flat[p] == e for p, e in zip(sub.positions, sub.events))
    )


@pytest.fixture(scope="module")
def sim_trace(library):
    cfg = SimConfig(initiators=default_initiators(library), instances_per_initiator=15, seed=21)
    return simulate(library, cfg).trace


class TestAddressSlice:
    def test_worked_example(self, address_trace, e1, e2, e3):
        slices = address_slice(address_trace)
        assert [s.key for s in slices] == [10, 15]
        assert _etypes(slices[0]) == (e1, e2, e3)
        assert _etypes(slices[1]) == (e1, e2, e1)

    def test_single_address(self, e1, e2):
        trace = Trace(((inst(e1, 7),), (inst(e2, 7),)))
        slices = address_slice(trace)
        assert len(slices) == 1
        assert list(_etypes(slices[0])) == [e1, e2]

    def test_disjoint_addresses_partition(self, e1, e2, e3):
        trace = Trace(((inst(e1, 1), inst(e2, 2)), (inst(e3, 3), inst(e1, 2))))
        slices = address_slice(trace)
        assert len(slices) == 3
        union = Counter(e for s in slices for e in s.events)
        assert union == Counter(trace.instances())

    def test_addr_less_copied(self, e1, e2, e3):
        trace = Trace(((inst(e1, 1),), (inst(e2),), (inst(e3, 2),)))
        slices = address_slice(trace)
        assert [_etypes(s) for s in slices] == [(e1, e2), (e2, e3)]

    def test_addr_less_residual(self, e1, e2, e3):
        trace = Trace(((inst(e1, 1),), (inst(e2),), (inst(e3, 2),)))
        slices = address_slice(trace, policy="residual")
        assert [s.key for s in slices] == [1, 2, None]
        assert Counter(e for s in slices for e in s.events) == Counter(trace.instances())

    def test_only_addr_less(self, e1, e2):
        trace = Trace.from_sequence([inst(e1), inst(e2)])
        slices = address_slice(trace)
        assert len(slices) == 1 and slices[0].key is None

    def test_purity_and_order_on_simulated(self, sim_trace):
        for s in address_slice(sim_trace):
            assert {e.addr for e in s.events} == {s.key}
            assert _is_projection(s, sim_trace)

    def test_unknown_policy(self, address_trace):
        with pytest.raises(SlicingError):
            address_slice(address_trace, policy="drop")


class TestCausalitySlice:
    def test_worked_example(self, causality_trace, causality_events):
        e0, e1, e2, e3 = causality_events
        slices = causality_slice(causality_trace)
        assert [_etypes(s) for s in slices] == [(e0, e2), (e1, e3)]

    def test_single_event(self, e1):
        slices = causality_slice(Trace.from_sequence([inst(e1)]))
        assert len(slices) == 1 and len(slices[0]) == 1

    def test_merge_on_ambiguity(self):
        a, b, c = ev("X", "Y", "a"), ev("Z", "Y", "b"), ev("Y", "W", "c")
        slices = causality_slice(Trace.from_sequence([inst(a), inst(b), inst(c)]))
        assert [_etypes(s) for s in slices] == [(a, b, c)]
        assert slices[0].positions == (0, 1, 2)

    def test_merge_interleaves_by_position(self):
        # two chains ending at Y, merged when Y sends
        a1, a2 = ev("P", "Q", "a1"), ev("Q", "Y", "a2")
        b1 = ev("R", "Y", "b1")
        c = ev("Y", "W", "c")
        trace = Trace.from_sequence([inst(a1), inst(b1), inst(a2), inst(c)])
        slices = causality_slice(trace)
        assert [_etypes(s) for s in slices] == [(a1, b1, a2, c)]

    def test_conservation_and_chains_on_simulated(self, sim_trace):
        slices = causality_slice(sim_trace)
        union = Counter(e for s in slices for e in s.events)
        assert union == Counter(sim_trace.instances())
        for s in slices:
            assert _is_projection(s, sim_trace)

    def test_chain_property_without_merges(self):
        events = [ev("A", "B", "1"), ev("C", "D", "2"), ev("B", "E", "3"), ev("D", "F", "4"), ev("E", "G", "5")]
        slices = causality_slice(Trace.from_sequence(inst(e) for e in events))
        for s in slices:
            ets = _etypes(s)
            assert all(causality_ok(x, y) for x, y in zip(ets, ets[1:]))


class TestDispatch:
    def test_none(self, address_trace):
        slices = slice_trace(address_trace, "none")
        assert len(slices) == 1 and len(slices[0]) == 6

    def test_none_on_empty_trace(self):
        slices = slice_trace(Trace(()), "none")
        assert len(slices) == 1
        assert slices[0].events == () and slices[0].origin == "none"

    def test_address(self, address_trace):
        assert len(slice_trace(address_trace, "address")) == 2

    def test_address_then_causality_fixpoint(self):
        a1, a2 = ev("A", "B", "x"), ev("B", "C", "y")
        b1, b2 = ev("P", "Q", "u"), ev("Q", "R", "v")
        trace = Trace(((inst(a1, 1), inst(b1, 2)), (inst(a2, 1), inst(b2, 2))))
        by_addr = slice_trace(trace, "address")
        composed = slice_trace(trace, "address_then_causality")
        assert [_etypes(s) for s in composed] == [_etypes(s) for s in by_addr]
        assert [s.key for s in composed] == [1, 2]

    def test_cli_alias(self, address_trace):
        assert slice_trace(address_trace, "address+causality") == slice_trace(
            address_trace, "address_then_causality"
        )

    def test_unknown_method(self, address_trace):
        with pytest.raises(SlicingError):
            slice_trace(address_trace, "tag")

    def test_slice_traces(self, address_trace, causality_trace):
        out = slice_traces([address_trace, causality_trace], "causality")
        assert len(out) == 2


class TestFiles:
    def test_save_and_load(self, tmp_path, address_trace, causality_trace):
        slices = slice_traces([address_trace, causality_trace], "address")
        entries = save_sliced(slices, tmp_path, "address", sources=["a.jsonl", "b.jsonl"])
        assert entries[0] == {"file": "sub_0000_0000.jsonl", "method": "address", "key": 10, "source": "a.jsonl"}
        assert load_index(tmp_path) == entries
        loaded = load_sliced(tmp_path)
        assert len(loaded) == len(entries)
        assert [e.etype for e in loaded[1].instances()] == list(_etypes(slices[0][1]))

    def test_missing_index(self, tmp_path):
        with pytest.raises(SlicingError):
            load_index(tmp_path)
