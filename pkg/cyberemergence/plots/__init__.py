from cyberemergence.plots.histogram import extinction_histogram
from cyberemergence.plots.run_sequence_plot import (ensemble_plot,
                                                    mean_field_plot,
                                                    run_sequence_plot)
from cyberemergence.plots.threshold_plot import threshold_plot
