"""Figure rendering for sweep aggregate CSVs."""

from .render import FIGURE_KINDS, MissingColumnError, PlotSpec, render

__all__ = ["FIGURE_KINDS", "MissingColumnError", "PlotSpec", "render"]
