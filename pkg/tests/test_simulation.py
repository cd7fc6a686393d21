import pytest

from conftest import chain_flow, ev

from flowminer.errors import ConfigError, FlowValidationError, SimulationError
from flowminer.flows import Flow, Transition, enumerate_executions
from flowminer.simulation import (
    Initiator,
    SimConfig,
    default_initiators,
    ground_truth,
    simulate,
    simulate_corpus,
    spawn_seeds,
    start_events,
)


def _cfg(initiators, **kw):
    return SimConfig(initiators=tuple(initiators), **kw)


class TestConfig:
    def test_defaults(self):
        cfg = _cfg([Initiator("CPU0", ("cpu_write",))])
        assert cfg.instances_per_initiator == 100
        assert (cfg.delay_min, cfg.delay_max) == (1, 10)

    @pytest.mark.parametrize(
        "kw, field",
        [
            ({"delay_min": 5, "delay_max": 2}, "delay_max"),
            ({"delay_min": 0}, "delay_min"),
            ({"instances_per_initiator": 0}, "instances_per_initiator"),
            ({"address_pool": 0}, "address_pool"),
            ({"seed": -1}, "seed"),
        ],
    )
    def test_invalid(self, kw, field):
        with pytest.raises(ConfigError) as info:
            _cfg([Initiator("CPU0", ("cpu_write",))], **kw)
        assert info.value.field == field

    def test_no_initiators(self):
        with pytest.raises(ConfigError):
            SimConfig(initiators=())

    def test_default_initiators_group_by_start(self, library):
        initiators = {i.component: set(i.flows) for i in default_initiators(library)}
        assert initiators["CPU0"] == {"cpu_write", "cpu_read"}
        assert initiators["CPU1"] == {"coherence"}
        assert initiators["Periph1"] == {"periph_read"}


class TestSimulate:
    def test_single_instance_single_step(self, minimal_flow):
        cfg = _cfg([Initiator("A", ("minimal",))], instances_per_initiator=1, delay_min=1, delay_max=1)
        result = simulate([minimal_flow], cfg)
        assert len(result.trace) == 1
        assert result.trace.n_events == 1
        assert result.instance_ids == [0]

    def test_deterministic(self, library):
        cfg = _cfg(default_initiators(library), instances_per_initiator=20, seed=11)
        a = simulate(library, cfg)
        b = simulate(library, cfg)
        assert a.trace == b.trace
        assert a.provenance == b.provenance

    def test_different_seed_differs(self, library):
        cfg = _cfg(default_initiators(library), instances_per_initiator=20, seed=1)
        assert simulate(library, cfg).trace != simulate(library, cfg.with_seed(2)).trace

    def test_instance_count(self, fork_flow):
        initiators = [Initiator(f"I{i}", ("cpu_write",)) for i in range(5)]
        result = simulate([fork_flow], _cfg(initiators, instances_per_initiator=100, seed=3))
        assert len(result.instance_ids) == 500

    def test_every_instance_projects_to_an_execution(self, library):
        cfg = _cfg(default_initiators(library), instances_per_initiator=30, seed=5)
        result = simulate(library, cfg)
        executions = ground_truth(library)
        for iid in result.instance_ids:
            flow = result.instance_flow(iid)
            assert result.project_instance(iid) in {e.events for e in executions[flow]}

    def test_no_empty_steps_and_provenance_matches(self, library):
        cfg = _cfg(default_initiators(library), instances_per_initiator=10, seed=9)
        result = simulate(library, cfg)
        assert all(len(step) > 0 for step in result.trace.steps)
        assert len(result.provenance) == result.trace.n_events
        by_step = {}
        for r in result.provenance:
            by_step.setdefault(r.step, []).append(r.event)
        for i, step in enumerate(result.trace.steps):
            assert tuple(by_step[i]) == step

    def test_instance_keeps_one_address(self, fork_flow):
        cfg = _cfg([Initiator("CPU0", ("cpu_write",))], instances_per_initiator=20, seed=4)
        result = simulate([fork_flow], cfg)
        for iid in result.instance_ids:
            addrs = {r.event.addr for r in result.provenance if r.instance == iid}
            assert len(addrs) == 1
            assert 0 <= addrs.pop() < cfg.address_pool

    def test_unaddressed_flow(self):
        flow = chain_flow("plain", [ev("A", "B", "x"), ev("B", "A", "y")], addressed=False)
        cfg = _cfg([Initiator("A", ("plain",))], instances_per_initiator=5)
        result = simulate([flow], cfg)
        assert all(e.addr is None for e in result.trace.instances())

    def test_single_initiator_does_not_interleave(self, periph_read):
        cfg = _cfg([Initiator("Periph1", ("periph_read",))], instances_per_initiator=10, seed=2)
        result = simulate([periph_read], cfg)
        assert all(len(step) == 1 for step in result.trace.steps)
        assert result.trace.n_events == 40

    def test_dataframe(self, fork_flow):
        cfg = _cfg([Initiator("CPU0", ("cpu_write",))], instances_per_initiator=3)
        df = simulate([fork_flow], cfg).to_dataframe()
        assert list(df.columns) == ["step", "src", "dest", "cmd", "addr", "instance", "flow"]
        assert set(df["flow"]) == {"cpu_write"}


class TestErrors:
    def test_empty_flow_set(self):
        with pytest.raises(SimulationError):
            simulate([], _cfg([Initiator("A", ("x",))]))

    def test_unknown_flow(self, fork_flow):
        with pytest.raises(SimulationError, match="unknown flows"):
            simulate([fork_flow], _cfg([Initiator("A", ("nope",))]))

    def test_invalid_flow(self):
        bad = Flow("bad", {"p0", "p1"}, (Transition("t1", {"p0"}, {"p1"}),), {}, {"p0"}, {"p1"})
        with pytest.raises(FlowValidationError):
            simulate([bad], _cfg([Initiator("A", ("bad",))]))


class TestCorpus:
    def test_seeds_are_spawned(self, fork_flow):
        cfg = _cfg([Initiator("CPU0", ("cpu_write",))], instances_per_initiator=10, seed=7)
        results = simulate_corpus([fork_flow], cfg, n_traces=3)
        assert [r.seed for r in results] == spawn_seeds(7, 3)
        assert len({r.seed for r in results}) == 3
        again = simulate_corpus([fork_flow], cfg, n_traces=3)
        assert [r.trace for r in results] == [r.trace for r in again]

    def test_needs_one_trace(self, fork_flow):
        with pytest.raises(SimulationError):
            simulate_corpus([fork_flow], _cfg([Initiator("CPU0", ("cpu_write",))]), n_traces=0)

    def test_start_events(self, fork_flow):
        starts = start_events({fork_flow.name: enumerate_executions(fork_flow)})
        assert starts == {ev("CPU0", "L2", "WrReq")}
