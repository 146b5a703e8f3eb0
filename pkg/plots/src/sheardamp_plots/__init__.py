"""Offline figure rendering for sheardamp run and sweep artifacts.

Consumes the solver's NDJSON time series and sweep tables as plain files;
nothing here imports the solver package.
"""

from .spec import PlotSpec
from .figures import plot_decay, plot_envelope, plot_lifespan

__version__ = "0.1.0"

__all__ = ["PlotSpec", "plot_decay", "plot_envelope", "plot_lifespan"]
