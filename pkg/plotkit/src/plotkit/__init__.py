"""Batch renderer for tomography sweep CSVs."""

__version__ = "0.1.0"

from .errors import DataShapeError, PlotkitError, SchemaError
from .figures import PlotSpec, build_heatmap, build_lines, plot_heatmap, plot_lines
from .io import read_sweep

__all__ = [
    "DataShapeError",
    "PlotkitError",
    "PlotSpec",
    "SchemaError",
    "__version__",
    "build_heatmap",
    "build_lines",
    "plot_heatmap",
    "plot_lines",
    "read_sweep",
]
