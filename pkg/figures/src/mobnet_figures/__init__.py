"""Figure rendering for mobility-pipeline output files."""

from .loess import LoessParams, loess_smooth, tricube
from .render import (
    PERIOD_MARKERS,
    render_all,
    render_percolation,
    render_persistence_map,
    render_timeseries,
)

__version__ = "0.1.0"
