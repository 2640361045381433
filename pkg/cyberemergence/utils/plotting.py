import matplotlib.pyplot as plt


def show_and_save_plot(show=True, save=False, filename="plot.png", dpi=100):
    fig = plt.gcf()

    if save:
        # Fixed metadata keeps repeated saves byte-identical.
        fig.savefig(filename, dpi=dpi, metadata={"Software": None})

    if show:
        plt.show()

    return fig


def close_all():
    plt.close("all")
