"""
EXTINCTION HISTOGRAM

## Purpose
Summarise when attacks were wiped out across replicates.

## Definition
* Vertical axis: number of replicates
* Horizontal axis: extinction step
Replicates that survived to the horizon are left out and their number is
reported in the axis label.
"""


import numpy as np
import matplotlib.pyplot as plt

from cyberemergence.utils.plotting import show_and_save_plot


def extinction_histogram(summary, bins=20, x_label="Extinction step",
                         y_label="Replicates", title=None, edgecolor="k",
                         show_statistics=True, ax=None, show=True,
                         save=False, filename="extinction_histogram.png",
                         **kwargs):

    steps = np.array([s for s in summary.extinction_steps if s is not None],
                     dtype=float)
    survivors = summary.replicates - len(steps)

    if len(steps):
        mean, std = steps.mean(), steps.std()
    else:
        mean, std = np.nan, np.nan

    if ax is None:
        fig, ax = plt.subplots(gridspec_kw={"bottom": 0.2}, figsize=(6, 4))

    if len(steps):
        ax.hist(steps, bins=bins, edgecolor=edgecolor, **kwargs)

    if show_statistics:
        x_label += "\n(mean={:.2f}, std={:.2f}, survived={}/{})".format(
            mean, std, survivors, summary.replicates)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.set_title(title)

    show_and_save_plot(show=show, save=save, filename=filename)

    return mean, std, survivors
