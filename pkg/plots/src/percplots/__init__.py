"""Figure rendering for percolation sweep results."""
from .plotting import (
    AXIS_MODES,
    PlotSpec,
    plot_diameter_scaling,
    plot_edge_histogram,
)

__all__ = [
    "AXIS_MODES",
    "PlotSpec",
    "plot_diameter_scaling",
    "plot_edge_histogram",
]

__version__ = "0.1.0"
