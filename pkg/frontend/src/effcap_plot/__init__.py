"""Chart renderer for effcap sweep CSVs; read-only over the CSV contract."""

from .reader import EmptySeriesError, SchemaError, SweepTable, read_sweep_csv
from .render import FigureKind, PlotJob, Series, build_figure, collect_series, render

__version__ = "0.1.0"

__all__ = [
    "EmptySeriesError", "SchemaError", "SweepTable", "read_sweep_csv",
    "FigureKind", "PlotJob", "Series", "build_figure", "collect_series",
    "render",
]
