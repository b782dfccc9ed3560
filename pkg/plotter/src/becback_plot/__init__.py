"""Figure rendering for becback CSV output."""

__version__ = "0.1.0"

from .render import (FIGURE_IDS, PlotJob, ValidationError, build_figure,
                     read_series, render)

__all__ = ["__version__", "FIGURE_IDS", "PlotJob", "ValidationError",
           "build_figure", "read_series", "render"]
