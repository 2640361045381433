"""
THRESHOLD PLOT

## Purpose
See where a partially interconnected system crosses the die-out threshold.

## Definition
* Vertical axis: λ1 of the bridge composite
* Horizontal axis: number of cross edges added
* Horizontal line: β/γ
Points above the line are in the persistent regime.
"""


import matplotlib.pyplot as plt

from cyberemergence.utils.plotting import show_and_save_plot


def threshold_plot(sweep, ratio, x_label="Cross edges", y_label="λ1",
                   title=None, ax=None, show=True, save=False,
                   filename="threshold_plot.png", **kwargs):
    """`sweep` is the frame returned by emergence.sweep_bridges."""

    if ax is None:
        fig, ax = plt.subplots(gridspec_kw={"bottom": 0.2}, figsize=(6, 4))

    persist = sweep["lambda1"] > ratio
    ax.scatter(sweep.loc[~persist, "bridges"], sweep.loc[~persist, "lambda1"],
               label="die out", **kwargs)
    ax.scatter(sweep.loc[persist, "bridges"], sweep.loc[persist, "lambda1"],
               label="persist", marker="x", **kwargs)
    ax.axhline(y=ratio, c="k", label="β/γ={:.3f}".format(ratio))

    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.set_title(title)
    ax.legend()

    show_and_save_plot(show=show, save=save, filename=filename)

    return ax
