import json

import pytest

from conftest import chain_flow, ev

from flowminer.errors import FlowError, FlowInputError, TransitionNotEnabledError, UnboundedFlowError
from flowminer.flows import (
    EventType,
    Flow,
    Transition,
    causality_ok,
    describe_library,
    enabled,
    enumerate_executions,
    enumerate_firings,
    fire,
    flow_from_dict,
    flow_to_dict,
    load_flow,
    resolve_flow_ref,
    save_flow,
    validate_flow,
)


def _naive_executions(flow: Flow) -> set:
    """Recursive enumeration written straight from the execution definition."""
    out = set()

    def walk(marking, last, path):
        for t in sorted(flow.transitions, key=lambda t: t.id):
            if not t.preset <= marking:
                continue
            if last is None and not flow.initial_marking <= t.preset:
                continue
            if last is not None and not t.preset <= last.postset:
                continue
            nxt = (marking - t.preset) | t.postset
            if t.postset <= flow.end_marking:
                out.add(tuple(flow.labeling[p.id] for p in path + [t]))
                continue
            if len(path) < 20:
                walk(nxt, t, path + [t])

    walk(flow.initial_marking, None, [])
    return out


class TestEventType:
    def test_str_and_order(self):
        a = ev("A", "B", "x")
        b = ev("A", "C", "a")
        assert str(a) == "A:B:x"
        assert sorted([b, a]) == [a, b]

    @pytest.mark.parametrize("field", ["src", "dest", "cmd"])
    def test_empty_token_rejected(self, field):
        kwargs = {"src": "A", "dest": "B", "cmd": "x"}
        kwargs[field] = " "
        with pytest.raises(ValueError):
            EventType(**kwargs)


class TestFiring:
    def test_enabled_and_fire(self, fork_flow):
        ts = enabled(fork_flow, {"p0"})
        assert [t.id for t in ts] == ["t1"]
        assert fire(fork_flow, {"p0"}, fork_flow.transition("t1")) == frozenset({"p1"})

    def test_fire_not_enabled(self, fork_flow):
        with pytest.raises(TransitionNotEnabledError):
            fire(fork_flow, {"p0"}, fork_flow.transition("t2"))

    def test_unknown_place_rejected(self, fork_flow):
        with pytest.raises(FlowInputError):
            enabled(fork_flow, {"nowhere"})

    def test_branch_point_enables_two(self, fork_flow):
        assert {t.id for t in enabled(fork_flow, {"p1"})} == {"t2", "t10"}


class TestExecutions:
    def test_fork_flow_three_executions(self, fork_flow):
        executions = enumerate_executions(fork_flow)
        assert len(executions) == 3
        assert sorted(len(e) for e in executions) == [2, 4, 8]
        firings = {e.firing for e in executions}
        assert ("t1", "t10") in firings
        assert ("t1", "t2", "t3", "t9") in firings
        assert tuple(f"t{i}" for i in range(1, 9)) in firings

    def test_minimal_flow(self, minimal_flow):
        executions = enumerate_executions(minimal_flow)
        assert [e.events for e in executions] == [(ev("A", "B", "x"),)]

    def test_matches_naive_enumeration(self, library):
        for flow in library:
            assert {e.events for e in enumerate_executions(flow)} == _naive_executions(flow)

    def test_no_executions_when_end_unreachable(self):
        flow = Flow(
            name="dead",
            places={"p0", "p1", "p_end"},
            transitions=(Transition("t1", {"p0"}, {"p1"}),),
            labeling={"t1": ev("A", "B", "x")},
            initial_marking={"p0"},
            end_marking={"p_end"},
        )
        assert enumerate_executions(flow) == []
        codes = [v.code for v in validate_flow(flow)]
        assert "no executions" in codes

    def test_self_loop_transition_dropped_as_revisit(self):
        # t_loop moves p1 -> p1; the marking repeats, so that path is dropped
        flow = Flow(
            name="loop",
            places={"p0", "p1", "p_end"},
            transitions=(
                Transition("t1", {"p0"}, {"p1"}),
                Transition("t_loop", {"p1"}, {"p1"}),
                Transition("t_end", {"p1"}, {"p_end"}),
            ),
            labeling={"t1": ev("A", "B", "x"), "t_loop": ev("B", "B", "y"), "t_end": ev("B", "C", "z")},
            initial_marking={"p0"},
            end_marking={"p_end"},
        )
        assert enumerate_firings(flow) == [("t1", "t_end")]

    def test_unbounded_flow_raises(self):
        # a long chain exceeding the step bound
        events = [ev(f"N{i}", f"N{i + 1}", "m") for i in range(10)]
        flow = chain_flow("long", events)
        with pytest.raises(UnboundedFlowError, match="possibly unbounded flow"):
            enumerate_executions(flow, max_steps=5)
        assert len(enumerate_executions(flow, max_steps=64)) == 1


class TestValidation:
    def test_library_is_clean(self, library):
        for flow in library:
            assert [v for v in validate_flow(flow) if v.is_error] == []
            assert not any(v.code == "causality-inconsistent labeling" for v in validate_flow(flow))

    def test_unlabeled_transition(self):
        flow = Flow("bad", {"p0", "p1"}, (Transition("t1", {"p0"}, {"p1"}),), {}, {"p0"}, {"p1"})
        codes = {v.code for v in validate_flow(flow)}
        assert "unlabeled transition" in codes

    def test_empty_preset(self):
        flow = Flow("bad", {"p0", "p1"}, (Transition("t1", set(), {"p1"}),),
                    {"t1": ev("A", "B", "x")}, {"p0"}, {"p1"})
        assert "empty preset" in {v.code for v in validate_flow(flow)}

    def test_causality_inconsistent_labeling_is_warning(self):
        flow = chain_flow("nc", [ev("A", "B", "x"), ev("C", "D", "y")])
        violations = validate_flow(flow)
        assert [v.code for v in violations] == ["causality-inconsistent labeling"]
        assert not violations[0].is_error


class TestCausality:
    def test_chained(self):
        assert causality_ok(ev("A", "B", "x"), ev("B", "C", "y"))

    def test_unrelated(self):
        assert not causality_ok(ev("A", "B", "x"), ev("C", "D", "y"))

    def test_self_loop(self):
        e = ev("A", "A", "x")
        assert causality_ok(e, e)


class TestLoaders:
    def test_roundtrip_file(self, tmp_path, fork_flow):
        path = tmp_path / "flow.json"
        save_flow(fork_flow, path)
        loaded = load_flow(path)
        assert flow_to_dict(loaded) == flow_to_dict(fork_flow)
        assert {e.events for e in enumerate_executions(loaded)} == {
            e.events for e in enumerate_executions(fork_flow)
        }

    def test_unknown_field_rejected(self, fork_flow):
        d = flow_to_dict(fork_flow)
        d["color"] = "red"
        with pytest.raises(FlowError):
            flow_from_dict(d)

    def test_missing_event_leaves_unlabeled(self, fork_flow):
        d = flow_to_dict(fork_flow)
        d["transitions"][0]["event"] = None
        flow = flow_from_dict(d)
        assert "unlabeled transition" in {v.code for v in validate_flow(flow)}

    def test_addressed_flag(self, fork_flow):
        d = flow_to_dict(fork_flow)
        d["addressed"] = False
        assert flow_from_dict(d).addressed is False

    def test_resolve_library_ref(self):
        assert resolve_flow_ref("library:periph_read").name == "periph_read"

    def test_resolve_relative_path(self, tmp_path, fork_flow):
        save_flow(fork_flow, tmp_path / "flows" / "f.json")
        assert resolve_flow_ref("flows/f.json", tmp_path).name == fork_flow.name

    def test_resolve_missing_file(self, tmp_path):
        with pytest.raises(FlowError):
            resolve_flow_ref("nope.json", tmp_path)

    def test_library_contents(self, library):
        names = [f.name for f in library]
        assert names == sorted(names)
        assert {"cpu_write", "cpu_read", "coherence", "periph_write", "periph_read"} <= set(names)
        descriptions = describe_library()
        assert all(descriptions[n] for n in names)

    def test_library_files_are_json(self, library):
        from flowminer.flows import library_flow_paths
        for path in library_flow_paths():
            with open(path, encoding="utf-8") as f:
                assert json.load(f)["name"] in {flow.name for flow in library}
