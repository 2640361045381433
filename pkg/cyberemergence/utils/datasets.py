"""Canned inputs for demonstrations and tests."""

from cyberemergence.graph import make_complete
from cyberemergence.hyperprop import (Trace, high_in, low_in, low_out)
from cyberemergence.spectral import DynamicsParams


def load_interconnection_example(n1=6, n2=6, beta=0.4, gamma=0.05):
    """
    Two complete graphs whose attacks die out on their own
    (λ1 = 5 < β/γ = 8) but persist once fully interconnected
    (λ1 = 11 > 8).
    """
    return ([make_complete(n1), make_complete(n2)],
            DynamicsParams(beta=beta, gamma=gamma))


def load_noninterference_pool():
    """Six High/Low traces, in canonical order."""
    return [
        Trace([low_out(0)]),
        Trace([low_out(1)]),
        Trace([high_in(0), low_out(0)]),
        Trace([high_in(1), low_out(0)]),
        Trace([high_in(1), low_out(1)]),
        Trace([low_in(0), low_out(0)]),
    ]


def load_response_time_pool(times=(1, 3)):
    """One single-output trace per response time."""
    return [Trace([low_out(1, rt)]) for rt in times]


if __name__ == "__main__":
    for trace in load_noninterference_pool():
        print(trace)
