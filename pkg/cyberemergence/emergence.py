"""
EMERGENCE

## Purpose
Show that a property of a composed cybersystem need not be possessed by its
components.

## Definition
A property of a cybersystem is emergent if the cybersystem has it while its
lower-level components do not. Here the components are the input graphs and
the property is attack persistence: every component has λ1 < β/γ (attacks are
wiped out) while the composite has λ1 > β/γ (they cannot be). Two complete
graphs K_n1 and K_n2 with λ1 = n_i - 1 < β/γ, fully interconnected, form
K_(n1+n2) with λ1 = n1 + n2 - 1, which may exceed β/γ.

The composite uses the same β and γ as its components.

## Verdict
`emergent` is decided from the spectral verdicts only and requires a strict
flip: every component DieOut and the composite Persist. A Critical verdict
anywhere blocks it. Simulation ensembles are attached as evidence; a finite
stochastic system dies out eventually whatever its regime, so they cannot
overturn the verdict.
"""


import enum
import json
from dataclasses import dataclass

import pandas as pd
from loguru import logger

from cyberemergence.dynamics import (DEFAULT_HORIZON, DEFAULT_REPLICATES,
                                     DEFAULT_WORKERS, EnsembleSummary,
                                     initial_state, parse_init_policy,
                                     run_replicates)
from cyberemergence.errors import ConvergenceError, InvalidArgumentError
from cyberemergence.graph import (bridge_interconnect, disjoint_union,
                                  full_interconnect)
from cyberemergence.spectral import (DEFAULT_CRITICAL_TOL, DEFAULT_MAX_ITER,
                                     DEFAULT_TOL, DynamicsParams, Regime,
                                     ThresholdVerdict, classify,
                                     spectral_radius)


class CompositionOp(str, enum.Enum):
    UNION = "union"
    JOIN = "join"
    BRIDGE = "bridge"


@dataclass(frozen=True)
class SimulationConfig:
    horizon: int = DEFAULT_HORIZON
    replicates: int = DEFAULT_REPLICATES
    master_seed: int = 0
    init: str = "all"
    workers: int = DEFAULT_WORKERS


@dataclass(frozen=True)
class GraphReport:
    n: int
    edges: int
    lambda1: float
    verdict: ThresholdVerdict
    ensemble: EnsembleSummary

    def to_dict(self):
        return {"n": self.n, "edges": self.edges, "lambda1": self.lambda1,
                "verdict": self.verdict.to_dict(),
                "ensemble": self.ensemble.to_dict()}

    @classmethod
    def from_dict(cls, data):
        return cls(data["n"], data["edges"], data["lambda1"],
                   ThresholdVerdict.from_dict(data["verdict"]),
                   EnsembleSummary.from_dict(data["ensemble"]))


@dataclass(frozen=True)
class EmergenceReport:
    components: tuple
    composite: GraphReport
    composition_op: CompositionOp
    params: DynamicsParams
    emergent: bool
    narrative: str

    def to_dict(self):
        return {
            "components": [c.to_dict() for c in self.components],
            "composite": self.composite.to_dict(),
            "composition_op": self.composition_op.value,
            "params": self.params.to_dict(),
            "emergent": self.emergent,
            "narrative": self.narrative,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            components=tuple(GraphReport.from_dict(c)
                             for c in data["components"]),
            composite=GraphReport.from_dict(data["composite"]),
            composition_op=CompositionOp(data["composition_op"]),
            params=DynamicsParams(**data["params"]),
            emergent=data["emergent"],
            narrative=data["narrative"],
        )

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def compose(components, op, bridge_edges=None):
    op = CompositionOp(op)

    if len(components) < 2:
        raise InvalidArgumentError(
            "composition needs at least 2 components, got {}".format(
                len(components)))

    if op is CompositionOp.BRIDGE:
        if bridge_edges is None:
            raise InvalidArgumentError("bridge composition needs an edge list")
        if len(components) != 2:
            raise InvalidArgumentError(
                "bridge composition takes exactly 2 components, "
                "got {}".format(len(components)))
        return bridge_interconnect(components[0], components[1], bridge_edges)

    binary = disjoint_union if op is CompositionOp.UNION else full_interconnect
    composite = components[0]
    for g in components[1:]:
        composite = binary(composite, g)
    return composite


def is_emergent(component_verdicts, composite_verdict):
    return (all(v.regime is Regime.DIE_OUT for v in component_verdicts)
            and composite_verdict.regime is Regime.PERSIST)


def _graph_report(g, params, sim, critical_tol, tol, max_iter):
    lambda1 = spectral_radius(g, tol=tol, max_iter=max_iter).lambda1
    verdict = classify(lambda1, params, critical_tol=critical_tol)
    init = initial_state(g.n, sim.init, sim.master_seed)
    ensemble = run_replicates(g, params, init, sim.horizon, sim.replicates,
                              sim.master_seed, workers=sim.workers)
    return GraphReport(g.n, g.edge_count, lambda1, verdict, ensemble)


def _narrative(components, composite, op, params, emergent):
    ratio = params.ratio
    parts = ", ".join("{} (λ1={:.4f})".format(c.verdict.regime.value,
                                              c.lambda1) for c in components)
    text = ("β/γ={:.4f}. Components: {}. {} composite: {} "
            "(λ1={:.4f}).".format(ratio, parts, op.value.capitalize(),
                                  composite.verdict.regime.value,
                                  composite.lambda1))
    if emergent:
        return text + (" Attacks are wiped out in every component but not "
                       "in the composite: persistence is emergent.")
    return text + " No emergent persistence."


def evaluate_emergence(components, op, params, sim=None, bridge_edges=None,
                       critical_tol=DEFAULT_CRITICAL_TOL, tol=DEFAULT_TOL,
                       max_iter=DEFAULT_MAX_ITER):
    sim = sim if sim is not None else SimulationConfig()
    op = CompositionOp(op)
    if params.gamma == 0:
        raise InvalidArgumentError("gamma must be > 0")
    parse_init_policy(sim.init)

    composite_graph = compose(components, op, bridge_edges)
    logger.info("{} of {} components -> n={}, {} edges", op.value,
                len(components), composite_graph.n,
                composite_graph.edge_count)

    reports = tuple(_graph_report(g, params, sim, critical_tol, tol, max_iter)
                    for g in components)
    composite = _graph_report(composite_graph, params, sim, critical_tol, tol,
                              max_iter)

    if op is CompositionOp.JOIN:
        largest = max(r.lambda1 for r in reports)
        if composite.lambda1 < largest - 1e-8:
            raise ConvergenceError(
                "join composite λ1={} below component λ1={}".format(
                    composite.lambda1, largest))

    emergent = is_emergent([r.verdict for r in reports], composite.verdict)

    return EmergenceReport(
        components=reports,
        composite=composite,
        composition_op=op,
        params=params,
        emergent=emergent,
        narrative=_narrative(reports, composite, op, params, emergent),
    )


def sweep_bridges(g1, g2, bridge_edges, params,
                  critical_tol=DEFAULT_CRITICAL_TOL, tol=DEFAULT_TOL,
                  max_iter=DEFAULT_MAX_ITER):
    """
    λ1 and regime of the bridge composite using the first k edges of
    `bridge_edges`, for k = 0..len(bridge_edges).
    """
    rows = []
    for k in range(len(bridge_edges) + 1):
        composite = bridge_interconnect(g1, g2, bridge_edges[:k])
        lambda1 = spectral_radius(composite, tol=tol,
                                  max_iter=max_iter).lambda1
        verdict = classify(lambda1, params, critical_tol=critical_tol)
        rows.append((k, lambda1, verdict.regime.value))

    return pd.DataFrame(rows, columns=["bridges", "lambda1", "regime"])


if __name__ == "__main__":
    from cyberemergence.utils import datasets

    components, params = datasets.load_interconnection_example()
    report = evaluate_emergence(components, "join", params,
                                SimulationConfig(horizon=200, replicates=20))
    print(report.narrative)
