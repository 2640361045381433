"""
ATTACK-DEFENSE DYNAMICS

## Purpose
Simulate how compromise spreads and gets cleaned on an attack-defense graph,
stochastically (Monte Carlo) and deterministically (mean field).

## Stochastic model
Discrete time, every node either Secure or Compromised. The update from the
state at time t is synchronous:
1. a node compromised at t is cleaned with probability β;
2. a node secure at t is compromised with probability 1 - (1-γ)^k, where k is
its number of neighbours compromised at t (independent trials over the k
edges).
A node cleaned in step t cannot be re-compromised in the same step. The
all-secure state is absorbing, so a trace stops at extinction.

## Random stream
Each replicate owns a PCG64 generator seeded with SeedSequence(seed). Every
step draws exactly n uniforms u_0..u_{n-1}, one per node in ascending id,
whatever the state. Node i stays compromised iff u_i < 1 - β and becomes
compromised iff u_i < 1 - (1-γ)^k. This is the per-edge law above realised by
inversion, and because each event compares a node's own uniform against a
threshold monotone in β and γ, runs with the same seed are coupled: the
compromised set is pointwise non-decreasing in γ and non-increasing in β
whenever (1-γ)^Δ >= β for the maximum degree Δ.

Replicate r of an ensemble uses split(master_seed, r), the first 64-bit word
of SeedSequence(master_seed, spawn_key=(r,)). Results are aggregated in
replicate order, so they do not depend on the number of workers.

## Mean field
p_i(t+1) = (1-β)·p_i(t) + (1 - p_i(t))·(1 - Π_{j∈N(i)} (1 - γ·p_j(t)))
Linearised at p = 0 its spectral radius is 1 - β + γ·λ1, which is below 1
exactly when λ1 < β/γ.
"""


from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np
import pandas as pd
from loguru import logger
from scipy.optimize import brentq

from cyberemergence.errors import ConvergenceError, InvalidArgumentError
from cyberemergence.graph import adjacency_matrix
from cyberemergence.utils.calculations import survival_interval


DEFAULT_HORIZON = 1000
DEFAULT_REPLICATES = 100
DEFAULT_WORKERS = 1
DEFAULT_FIXED_POINT_TOL = 1e-12

SEED_LIMIT = 2**64
# Spawn key reserved for drawing random initial states.
INIT_STREAM = 2**32


@dataclass(frozen=True)
class StateVector:
    compromised: tuple

    @property
    def n(self):
        return len(self.compromised)

    @property
    def compromised_count(self):
        return sum(self.compromised)

    @property
    def compromised_nodes(self):
        return frozenset(i for i, c in enumerate(self.compromised) if c)

    def as_array(self):
        return np.array(self.compromised, dtype=bool)

    @classmethod
    def from_array(cls, array):
        return cls(tuple(bool(x) for x in array))


def all_compromised(n):
    return StateVector((True,) * n)


def all_secure(n):
    return StateVector((False,) * n)


def from_nodes(n, nodes):
    nodes = set(nodes)
    bad = sorted(i for i in nodes if not 0 <= i < n)
    if bad:
        raise InvalidArgumentError(
            "initial nodes {} out of range for n={}".format(bad, n))
    return StateVector(tuple(i in nodes for i in range(n)))


def random_compromised(n, k, seed):
    if not 0 <= k <= n:
        raise InvalidArgumentError(
            "cannot compromise {} of {} nodes".format(k, n))
    rng = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(seed, spawn_key=(INIT_STREAM,))))
    nodes = rng.choice(n, size=k, replace=False) if k else []
    return from_nodes(n, (int(i) for i in nodes))


def parse_init_policy(policy):
    """
    Validates `all`, `random:<k>` or `nodes:<comma-list>` and returns it as
    a (kind, argument) pair.
    """
    if policy == "all":
        return "all", None

    kind, sep, argument = policy.partition(":")
    if not sep:
        raise InvalidArgumentError(
            "init policy must be all, random:<k> or nodes:<list>, "
            "got {!r}".format(policy))

    try:
        if kind == "random":
            k = int(argument)
            if k < 0:
                raise ValueError
            return "random", k
        if kind == "nodes":
            nodes = tuple(int(x) for x in argument.split(",") if x.strip())
            return "nodes", nodes
    except ValueError:
        pass

    raise InvalidArgumentError("invalid init policy {!r}".format(policy))


def initial_state(n, policy="all", seed=0):
    kind, argument = parse_init_policy(policy)
    if kind == "all":
        return all_compromised(n)
    if kind == "random":
        return random_compromised(n, argument, seed)
    return from_nodes(n, argument)


@dataclass(frozen=True)
class SimTrace:
    seed: int
    counts: tuple
    extinction_step: object = None
    states: object = field(default=None, compare=False, repr=False)

    @property
    def steps(self):
        return list(enumerate(self.counts))

    def compromised_at(self, step):
        """Compromised node set at `step`, empty after extinction."""
        if self.states is None:
            raise InvalidArgumentError("trace was run without record_states")
        if step < len(self.states):
            return self.states[step]
        return frozenset()


def _check_seed(seed, name="seed"):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidArgumentError(
            "{} must be an integer, got {!r}".format(name, seed))
    if not 0 <= seed < SEED_LIMIT:
        raise InvalidArgumentError(
            "{} must be a 64-bit unsigned integer, got {}".format(name, seed))


def _check_horizon(horizon):
    if isinstance(horizon, bool) or not isinstance(
            horizon, (int, np.integer)) or horizon < 0:
        raise InvalidArgumentError(
            "horizon must be an integer >= 0, got {!r}".format(horizon))


def split_seed(master_seed, index):
    _check_seed(master_seed, "master seed")
    sequence = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def simulate(g, params, init, horizon, seed, record_states=False):
    _check_horizon(horizon)
    _check_seed(seed)
    if init.n != g.n:
        raise InvalidArgumentError(
            "initial state has {} nodes, graph has {}".format(init.n, g.n))

    adjacency = adjacency_matrix(g)
    stay = 1.0 - params.beta
    keep_alive = 1.0 - params.gamma

    x = init.as_array()
    counts = [int(x.sum())]
    states = [init.compromised_nodes] if record_states else None

    if counts[0] == 0:
        return SimTrace(seed, tuple(counts), 0, _freeze(states))

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    extinction_step = None

    for t in range(1, horizon + 1):
        u = rng.random(g.n)
        pressure = adjacency @ x.astype(float)
        infect = 1.0 - keep_alive ** pressure
        x = np.where(x, u < stay, u < infect)

        counts.append(int(x.sum()))
        if record_states:
            states.append(frozenset(np.flatnonzero(x).tolist()))

        if counts[-1] == 0:
            extinction_step = t
            break

    return SimTrace(seed, tuple(counts), extinction_step, _freeze(states))


def _freeze(states):
    return None if states is None else tuple(states)


def extinction_time(trace):
    return trace.extinction_step


@dataclass(frozen=True)
class EnsembleSummary:
    replicates: int
    horizon: int
    extinction_steps: tuple
    survival_fraction_at_horizon: float
    survival_interval: tuple
    mean_compromised_fraction: tuple
    traces: tuple = field(default=(), compare=False, repr=False)

    @property
    def mean_extinction_step(self):
        steps = [s for s in self.extinction_steps if s is not None]
        if not steps:
            return None
        return float(np.mean(steps))

    def to_dict(self):
        return {
            "replicates": self.replicates,
            "horizon": self.horizon,
            "extinction_steps": list(self.extinction_steps),
            "survival_fraction_at_horizon": self.survival_fraction_at_horizon,
            "survival_interval": list(self.survival_interval),
            "mean_compromised_fraction": list(self.mean_compromised_fraction),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data["replicates"], data["horizon"],
                   tuple(data["extinction_steps"]),
                   data["survival_fraction_at_horizon"],
                   tuple(data["survival_interval"]),
                   tuple(data["mean_compromised_fraction"]))


def run_replicates(g, params, init, horizon, replicates, master_seed,
                   workers=DEFAULT_WORKERS):
    _check_horizon(horizon)
    if isinstance(replicates, bool) or not isinstance(
            replicates, (int, np.integer)) or replicates < 1:
        raise InvalidArgumentError(
            "replicates must be an integer >= 1, got {!r}".format(replicates))
    if workers < 1:
        raise InvalidArgumentError(
            "workers must be >= 1, got {}".format(workers))

    seeds = [split_seed(master_seed, r) for r in range(replicates)]
    run_one = partial(simulate, g, params, init, horizon)

    if workers == 1:
        traces = [run_one(seed) for seed in seeds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            traces = list(executor.map(run_one, seeds))

    counts = np.zeros((replicates, horizon + 1))
    for r, trace in enumerate(traces):
        counts[r, :len(trace.counts)] = trace.counts

    if g.n:
        mean_fraction = counts.mean(axis=0) / g.n
    else:
        mean_fraction = np.zeros(horizon + 1)

    extinction_steps = tuple(t.extinction_step for t in traces)
    survivors = sum(step is None for step in extinction_steps)

    logger.info("{} replicates on n={} over {} steps: {} survived",
                replicates, g.n, horizon, survivors)

    return EnsembleSummary(
        replicates=replicates,
        horizon=horizon,
        extinction_steps=extinction_steps,
        survival_fraction_at_horizon=survivors / replicates,
        survival_interval=survival_interval(survivors, replicates),
        mean_compromised_fraction=tuple(float(x) for x in mean_fraction),
        traces=tuple(traces),
    )


def traces_frame(traces):
    rows = [(step, replicate, count)
            for replicate, trace in enumerate(traces)
            for step, count in trace.steps]
    return pd.DataFrame(rows, columns=["step", "replicate",
                                       "compromised_count"])


@dataclass(frozen=True)
class MeanFieldTrace:
    steps: np.ndarray = field(compare=False)
    converged: bool
    final_total: float

    @property
    def final(self):
        return self.steps[-1]

    def to_frame(self):
        n = self.steps.shape[1]
        return pd.DataFrame({
            "step": np.arange(len(self.steps)),
            "total_p": self.steps.sum(axis=1),
            "max_p": self.steps.max(axis=1) if n else 0.0,
        })

    def to_dict(self):
        return {"steps": len(self.steps) - 1, "converged": self.converged,
                "final_total": self.final_total,
                "final_p": self.final.tolist()}


def mean_field_iterate(g, params, p0, horizon,
                       fixed_point_tol=DEFAULT_FIXED_POINT_TOL):
    _check_horizon(horizon)
    if not fixed_point_tol > 0:
        raise InvalidArgumentError(
            "fixed_point_tol must be > 0, got {}".format(fixed_point_tol))

    p = np.asarray(p0, dtype=float)
    if p.shape != (g.n,):
        raise InvalidArgumentError(
            "p0 has {} entries, graph has {} nodes".format(p.size, g.n))
    if np.any(np.isnan(p)) or np.any(p < 0) or np.any(p > 1):
        raise InvalidArgumentError("p0 entries must be in [0, 1]")

    adjacency = adjacency_matrix(g)
    steps = [p]
    converged = False

    for t in range(1, horizon + 1):
        with np.errstate(divide="ignore"):
            log_escape = np.log1p(-params.gamma * p)
        # Sparse product touches stored edges only, so -inf stays -inf.
        escape = np.exp(adjacency @ log_escape)
        following = (1.0 - params.beta) * p + (1.0 - p) * (1.0 - escape)

        if np.any(following < -1e-12) or np.any(following > 1 + 1e-12):
            raise ConvergenceError(
                "mean-field probabilities left [0, 1] at step {}".format(t),
                last_iterate=following, iterations=t)
        following = np.clip(following, 0.0, 1.0)

        delta = float(np.max(np.abs(following - p))) if g.n else 0.0
        steps.append(following)
        p = following

        if delta <= fixed_point_tol:
            converged = True
            logger.debug("mean field converged at step {}", t)
            break

    steps = np.vstack(steps) if g.n else np.zeros((len(steps), 0))
    return MeanFieldTrace(steps, converged, float(steps[-1].sum()))


def symmetric_fixed_point(n, params, xtol=1e-15):
    """
    Positive solution of p = (1-β)p + (1-p)(1 - (1-γp)^(n-1)), the
    mean-field endemic level on the complete graph K_n. Zero when
    γ·(n-1) <= β.
    """
    degree = n - 1
    if params.gamma * degree <= params.beta:
        return 0.0

    def excess(p):
        infect = -np.expm1(degree * np.log1p(-params.gamma * p))
        return (1.0 - params.beta) * p + (1.0 - p) * infect - p

    low = 1e-9
    if excess(low) <= 0:
        return 0.0
    return float(brentq(excess, low, 1.0, xtol=xtol))


if __name__ == "__main__":
    from cyberemergence.graph import make_complete
    from cyberemergence.spectral import DynamicsParams

    g = make_complete(12)
    params = DynamicsParams(beta=0.4, gamma=0.05)
    summary = run_replicates(g, params, all_compromised(g.n), horizon=200,
                             replicates=50, master_seed=42)
    print("survival fraction:", summary.survival_fraction_at_horizon)
    print("mean extinction step:", summary.mean_extinction_step)
    print("endemic level:", symmetric_fixed_point(12, params))
