"""
RUN SEQUENCE PLOT

## Purpose
Follow the level of compromise over time.

## Definition
* Vertically: compromised fraction (Monte Carlo mean over replicates) or
total infection probability (mean field)
* Horizontally: time step

Below the threshold the curve falls to zero geometrically; above it the
stochastic mean levels off at the endemic fraction until extinctions pull
it down, and the mean-field curve settles at its positive fixed point.
"""


import numpy as np
import matplotlib.pyplot as plt

from cyberemergence.utils.plotting import show_and_save_plot


def run_sequence_plot(series, x_label="Step", y_label="Compromised fraction",
                      title=None, y_lim=None, log_scale=False, label=None,
                      ax=None, show=True, save=False,
                      filename="run_sequence_plot.png", **kwargs):

    steps = np.arange(len(series))

    if ax is None:
        fig, ax = plt.subplots()

    ax.plot(steps, series, label=label, **kwargs)
    if log_scale:
        ax.set_yscale("log")
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.set_ylim(y_lim)
    ax.set_title(title)

    show_and_save_plot(show=show, save=save, filename=filename)

    return ax


def ensemble_plot(summaries, title="Mean compromised fraction", ax=None,
                  show=True, save=False, filename="ensemble_plot.png",
                  **kwargs):
    """`summaries` maps a legend label to an EnsembleSummary."""
    if ax is None:
        fig, ax = plt.subplots(gridspec_kw={"bottom": 0.15}, figsize=(7, 4))

    for label, summary in summaries.items():
        run_sequence_plot(summary.mean_compromised_fraction, label=label,
                          y_lim=(0, 1.05), title=title, ax=ax, show=False,
                          **kwargs)
    ax.legend()

    show_and_save_plot(show=show, save=save, filename=filename)

    return ax


def mean_field_plot(trace, title="Mean-field total infection", ax=None,
                    show=True, save=False, filename="mean_field_plot.png",
                    **kwargs):
    totals = trace.steps.sum(axis=1)
    # Log scale cannot show exact zeros.
    log_scale = bool(np.all(totals > 0))
    return run_sequence_plot(totals, y_label="Σ p_i", title=title,
                             log_scale=log_scale, ax=ax, show=show,
                             save=save, filename=filename, **kwargs)
