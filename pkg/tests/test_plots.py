import math

import matplotlib.pyplot as plt
import numpy as np
import pytest

from cyberemergence.dynamics import (all_compromised, mean_field_iterate,
                                     run_replicates)
from cyberemergence.emergence import sweep_bridges
from cyberemergence.graph import make_complete
from cyberemergence.plots import (ensemble_plot, extinction_histogram,
                                  mean_field_plot, run_sequence_plot,
                                  threshold_plot)
from cyberemergence.spectral import DynamicsParams
from cyberemergence.utils.plotting import close_all


PARAMS = DynamicsParams(0.4, 0.05)


@pytest.fixture(autouse=True)
def close_figures():
    yield
    close_all()


@pytest.fixture
def summary():
    return run_replicates(make_complete(6), PARAMS, all_compromised(6),
                          horizon=300, replicates=20, master_seed=1)


def test_run_sequence_plot(summary):
    ax = run_sequence_plot(summary.mean_compromised_fraction, show=False)
    assert len(ax.lines) == 1


def test_ensemble_plot_draws_one_line_per_summary(summary):
    ax = ensemble_plot({"a": summary, "b": summary}, show=False)
    assert len(ax.lines) == 2
    assert [t.get_text() for t in ax.get_legend().get_texts()] == ["a", "b"]


def test_extinction_histogram(summary):
    mean, std, survivors = extinction_histogram(summary, show=False)
    steps = [s for s in summary.extinction_steps if s is not None]
    assert survivors == 20 - len(steps)
    assert mean == pytest.approx(np.mean(steps))
    assert std == pytest.approx(np.std(steps))


def test_extinction_histogram_without_extinctions():
    summary = run_replicates(make_complete(6), DynamicsParams(0.0, 0.5),
                             all_compromised(6), horizon=10, replicates=3,
                             master_seed=0)
    mean, std, survivors = extinction_histogram(summary, show=False)
    assert math.isnan(mean) and math.isnan(std)
    assert survivors == 3


def test_mean_field_plot_uses_log_scale():
    trace = mean_field_iterate(make_complete(8), PARAMS, np.ones(8),
                               horizon=50)
    ax = mean_field_plot(trace, show=False)
    assert ax.get_yscale() == "log"


def test_threshold_plot_saves(tmp_path):
    k6 = make_complete(6)
    sweep = sweep_bridges(k6, k6, [(i, j) for i in range(6)
                                   for j in range(6)], PARAMS)
    path = tmp_path / "threshold.png"
    threshold_plot(sweep, PARAMS.ratio, show=False, save=True,
                   filename=str(path))
    assert path.stat().st_size > 0
    assert plt.gcf().axes[0].get_ylabel() == "λ1"
