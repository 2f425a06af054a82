"""Mobility-network analytics toolkit.

Builds weighted directed mobility graphs from origin-destination flow
records, tracks connectivity and flow-based efficiency over time, models
disruption via weight-ordered bond percolation with node persistence,
and exports geographic (Voronoi) views.
"""

from .errors import MobnetError, ParseError, ValidationError
from .geo import (
    BoundingBox,
    VoronoiCell,
    default_bounds,
    export_persistence_geojson,
    voronoi,
)
from .graph import (
    ComponentLabeling,
    MobilityGraph,
    TimeWindow,
    build_graph,
    daily_series,
    day_window,
    prepost_windows,
    residual_edge_fraction,
    weak_components,
    week_window,
)
from .ingest import (
    FlowRecord,
    NodeRegistry,
    NodeSite,
    filter_window,
    parse_flow_records,
    parse_node_registry,
    write_flow_csv,
    write_registry_csv,
)
from .metrics import (
    DistanceRow,
    EfficiencyReport,
    efficiency,
    efficiency_gini_series,
    gini,
    normalize_series,
    shortest_paths_from,
)
from .percolation import (
    OverlayPoint,
    PercolationStep,
    PercolationTrace,
    empirical_overlay,
    node_persistence,
    percolation_sweep,
)
from .synth import (
    ARCHETYPES,
    SYNTH_LOCKDOWN_DATE,
    SYNTH_SPAN_DAYS,
    SYNTH_START_DAY,
    ArchetypeParams,
    generate_synthetic,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
