import numpy as np
from statsmodels.stats.proportion import proportion_confint


def spectral_bounds(g):
    """
    Formula
    -------
    For the adjacency matrix of any graph with average degree d_avg and
    maximum degree d_max:
    max(d_avg, sqrt(d_max)) <= λ1 <= d_max.
    Returns (lower, upper); (0, 0) for graphs without nodes.
    """
    if g.n == 0:
        return 0.0, 0.0

    degree = g.degrees()
    d_max = float(degree.max())
    d_avg = float(degree.mean())
    return max(d_avg, np.sqrt(d_max)), d_max


def survival_interval(survivors, replicates, alpha=0.05):
    """Wilson score interval for a survival fraction."""
    low, high = proportion_confint(survivors, replicates, alpha=alpha,
                                   method="wilson")
    return float(low), float(high)


def linear_decay_rate(params, lambda1):
    """
    Spectral radius of the mean-field update linearised at p = 0:
    1 - β + γ·λ1. Below 1 the infection decays geometrically.
    """
    return 1.0 - params.beta + params.gamma * lambda1
