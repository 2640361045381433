"""
SPECTRAL THRESHOLD

## Purpose
Decide whether attacks die out on an attack-defense graph.

## Definition
Let λ1(G) be the largest eigenvalue of the adjacency matrix of G, β the
defense capability (probability that a compromised node is cleaned in a time
step) and γ the attack capability (probability that a compromise happens
over an edge in a time step). Attacks are eventually wiped out when

    λ1(G) < β/γ

and cannot be wiped out when λ1(G) > β/γ. The complete graph on n nodes has
λ1 = n-1.

## Computation
λ1 is found by power iteration on A + I from the all-ones vector, normalised
to unit infinity-norm at every step. A + I is primitive on connected graphs,
so the iteration does not oscillate on bipartite graphs (paths, stars), and
λ1(A + I) = λ1(A) + 1. The all-ones start is strictly positive, so on a
disconnected graph the value converges to the largest component radius. The
iteration stops when ||(A + I)v - μv||∞ <= tol.

Margins within `critical_tol` of zero are reported as Critical instead of
being forced to either side.
"""


import enum
from dataclasses import asdict, dataclass

import numpy as np
from loguru import logger
from scipy import sparse

from cyberemergence.errors import ConvergenceError, InvalidArgumentError
from cyberemergence.graph import adjacency_matrix


DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100000
DEFAULT_CRITICAL_TOL = 1e-9


class Regime(str, enum.Enum):
    DIE_OUT = "DieOut"
    PERSIST = "Persist"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class DynamicsParams:
    """β: per-node cure probability, γ: per-edge compromise probability."""
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("beta", "gamma"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(
                    value, (int, float, np.floating, np.integer)):
                raise InvalidArgumentError(
                    "{} must be a number, got {!r}".format(name, value))
            if not 0 <= value <= 1:
                raise InvalidArgumentError(
                    "{} must be in [0, 1], got {}".format(name, value))
            object.__setattr__(self, name, float(value))

    @property
    def ratio(self):
        if self.gamma == 0:
            raise InvalidArgumentError("gamma must be > 0")
        return self.beta / self.gamma

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class SpectralResult:
    lambda1: float
    iterations: int
    residual: float

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ThresholdVerdict:
    regime: Regime
    lambda1: float
    ratio: float
    margin: float

    def to_dict(self):
        return {"regime": self.regime.value, "lambda1": self.lambda1,
                "ratio": self.ratio, "margin": self.margin}

    @classmethod
    def from_dict(cls, data):
        return cls(Regime(data["regime"]), data["lambda1"], data["ratio"],
                   data["margin"])


def spectral_radius(g, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    if not tol > 0:
        raise InvalidArgumentError("tol must be > 0, got {}".format(tol))
    if max_iter < 1:
        raise InvalidArgumentError(
            "max_iter must be >= 1, got {}".format(max_iter))

    if g.n == 0:
        return SpectralResult(0.0, 0, 0.0)

    shifted = adjacency_matrix(g) + sparse.identity(g.n, format="csr")
    v = np.ones(g.n)
    residual = np.inf

    for iteration in range(1, max_iter + 1):
        w = shifted @ v
        mu = float(v @ w) / float(v @ v)
        residual = float(np.max(np.abs(w - mu * v)))

        if residual <= tol:
            logger.debug("power iteration converged: n={} iterations={} "
                         "residual={:.3e}", g.n, iteration, residual)
            return SpectralResult(max(mu - 1.0, 0.0), iteration, residual)

        v = w / np.max(np.abs(w))

    raise ConvergenceError(
        "power iteration did not converge in {} iterations "
        "(residual {:.3e} > tol {:.3e})".format(max_iter, residual, tol),
        last_iterate=v, residual=residual, iterations=max_iter)


def classify(lambda1, params, critical_tol=DEFAULT_CRITICAL_TOL):
    if critical_tol < 0:
        raise InvalidArgumentError(
            "critical_tol must be >= 0, got {}".format(critical_tol))

    ratio = params.ratio
    margin = ratio - lambda1

    if margin > critical_tol:
        regime = Regime.DIE_OUT
    elif margin < -critical_tol:
        regime = Regime.PERSIST
    else:
        regime = Regime.CRITICAL

    return ThresholdVerdict(regime, lambda1, ratio, margin)


def threshold_verdict(g, params, critical_tol=DEFAULT_CRITICAL_TOL,
                      tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    if params.gamma == 0:
        raise InvalidArgumentError("gamma must be > 0")

    result = spectral_radius(g, tol=tol, max_iter=max_iter)
    return classify(result.lambda1, params, critical_tol=critical_tol)


def critical_gamma(g, beta, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Attack capability at which λ1(G) = β/γ; infinite on edgeless graphs."""
    lambda1 = spectral_radius(g, tol=tol, max_iter=max_iter).lambda1
    if lambda1 == 0:
        return np.inf
    return beta / lambda1


def critical_beta(g, gamma, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Smallest defense capability that wipes attacks out; may exceed 1."""
    return gamma * spectral_radius(g, tol=tol, max_iter=max_iter).lambda1


if __name__ == "__main__":
    from cyberemergence.graph import make_complete

    params = DynamicsParams(beta=0.5, gamma=0.05)
    for n in (8, 11, 12):
        verdict = threshold_verdict(make_complete(n), params)
        print("K_{:<2} λ1={:.4f} β/γ={:.1f} -> {}".format(
            n, verdict.lambda1, verdict.ratio, verdict.regime.value))
