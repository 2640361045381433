from itertools import product

import numpy as np
import pytest

from cyberemergence.emergence import (CompositionOp, EmergenceReport,
                                      SimulationConfig, compose,
                                      evaluate_emergence, is_emergent,
                                      sweep_bridges)
from cyberemergence.errors import InvalidArgumentError
from cyberemergence.graph import make_complete, make_star
from cyberemergence.spectral import DynamicsParams, Regime, classify
from cyberemergence.utils.datasets import load_interconnection_example


QUICK = SimulationConfig(horizon=200, replicates=10, master_seed=42)


class TestCompose:

    def test_node_count_adds_up(self):
        components = [make_complete(3), make_star(4), make_complete(5)]
        for op in ("union", "join"):
            assert compose(components, op).n == 12

    def test_join_of_three(self):
        components = [make_complete(2)] * 3
        assert compose(components, CompositionOp.JOIN) == make_complete(6)

    def test_bridge(self):
        g = compose([make_complete(3), make_complete(3)], "bridge",
                    [(0, 0), (2, 1)])
        assert {(0, 3), (2, 4)} <= g.edges
        assert g.edge_count == 8

    def test_single_component(self):
        with pytest.raises(InvalidArgumentError):
            compose([make_complete(3)], "join")

    def test_bridge_without_edges(self):
        with pytest.raises(InvalidArgumentError):
            compose([make_complete(3), make_complete(3)], "bridge")

    def test_bridge_takes_two_components(self):
        with pytest.raises(InvalidArgumentError):
            compose([make_complete(3)] * 3, "bridge", [(0, 0)])

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            compose([make_complete(3)] * 2, "merge")


class TestEvaluateEmergence:

    def test_join_makes_persistence_emergent(self):
        components, params = load_interconnection_example()
        report = evaluate_emergence(components, "join", params, QUICK)

        for c in report.components:
            assert c.verdict.regime is Regime.DIE_OUT
            assert c.lambda1 == pytest.approx(5.0)
        assert report.composite.n == 12
        assert report.composite.edges == 66
        assert report.composite.lambda1 == pytest.approx(11.0)
        assert report.composite.verdict.regime is Regime.PERSIST
        assert report.emergent
        assert "persistence is emergent" in report.narrative

    def test_union_is_not_emergent(self):
        components, params = load_interconnection_example()
        report = evaluate_emergence(components, "union", params, QUICK)
        assert report.composite.lambda1 == pytest.approx(5.0)
        assert report.composite.verdict.regime is Regime.DIE_OUT
        assert not report.emergent
        assert "No emergent persistence." in report.narrative

    def test_persistence_already_present(self):
        params = DynamicsParams(0.4, 0.05)
        report = evaluate_emergence([make_complete(12)] * 2, "join", params,
                                    QUICK)
        assert all(c.verdict.regime is Regime.PERSIST
                   for c in report.components)
        assert not report.emergent

    def test_critical_composite_blocks(self):
        params = DynamicsParams(0.55, 0.05)
        report = evaluate_emergence([make_complete(6)] * 2, "join", params,
                                    QUICK)
        assert report.composite.verdict.regime is Regime.CRITICAL
        assert not report.emergent

    def test_critical_component_blocks(self):
        params = DynamicsParams(0.4, 0.05)
        report = evaluate_emergence([make_complete(9), make_complete(2)],
                                    "join", params, QUICK)
        assert report.components[0].verdict.regime is Regime.CRITICAL
        assert report.composite.verdict.regime is Regime.PERSIST
        assert not report.emergent

    def test_gamma_zero(self):
        with pytest.raises(InvalidArgumentError, match="gamma must be > 0"):
            evaluate_emergence([make_complete(3)] * 2, "join",
                               DynamicsParams(0.4, 0.0), QUICK)

    def test_bad_init_policy(self):
        sim = SimulationConfig(horizon=10, replicates=2, init="bogus")
        with pytest.raises(InvalidArgumentError):
            evaluate_emergence([make_complete(3)] * 2, "join",
                               DynamicsParams(0.4, 0.05), sim)

    def test_is_deterministic(self):
        components, params = load_interconnection_example()
        a = evaluate_emergence(components, "join", params, QUICK)
        b = evaluate_emergence(components, "join", params, QUICK)
        assert a == b
        assert a.to_json() == b.to_json()

    def test_json_round_trip(self):
        components, params = load_interconnection_example()
        report = evaluate_emergence(components, "bridge", params, QUICK,
                                    bridge_edges=[(0, 0), (1, 1)])
        assert EmergenceReport.from_json(report.to_json()) == report

    def test_monte_carlo_evidence(self):
        components, params = load_interconnection_example()
        sim = SimulationConfig(horizon=2000, replicates=200, master_seed=42)
        report = evaluate_emergence(components, "join", params, sim)

        assert report.emergent
        component_means = []
        for c in report.components:
            assert c.ensemble.survival_fraction_at_horizon <= 0.01
            component_means.append(c.ensemble.mean_extinction_step)

        composite_mean = report.composite.ensemble.mean_extinction_step
        assert composite_mean is None or composite_mean > max(component_means)


def test_is_emergent():
    params = DynamicsParams(0.4, 0.05)
    die_out, persist = classify(5.0, params), classify(11.0, params)
    assert is_emergent([die_out, die_out], persist)
    assert not is_emergent([die_out, persist], persist)
    assert not is_emergent([die_out], die_out)


class TestSweepBridges:

    def test_lambda1_grows_with_bridges(self):
        k6 = make_complete(6)
        edges = list(product(range(6), range(6)))
        sweep = sweep_bridges(k6, k6, edges, DynamicsParams(0.4, 0.05))

        assert list(sweep.columns) == ["bridges", "lambda1", "regime"]
        assert len(sweep) == 37
        assert sweep["lambda1"].iloc[0] == pytest.approx(5.0)
        assert sweep["lambda1"].iloc[-1] == pytest.approx(11.0)
        assert np.all(np.diff(sweep["lambda1"]) >= -1e-8)
        assert sweep["regime"].iloc[0] == "DieOut"
        assert sweep["regime"].iloc[-1] == "Persist"

    def test_bad_bridge_edge(self):
        with pytest.raises(InvalidArgumentError):
            sweep_bridges(make_complete(3), make_complete(3), [(0, 5)],
                          DynamicsParams(0.4, 0.05))
