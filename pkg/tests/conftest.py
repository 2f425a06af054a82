from datetime import datetime, timezone

import pytest

from mobnet.graph import MobilityGraph
from mobnet.ingest import FlowRecord, NodeRegistry, NodeSite


def utc(year, month, day, hour=0):
    return datetime(year, month, day, hour, tzinfo=timezone.utc)


@pytest.fixture
def triangle():
    """One-way 3-cycle with weights 1, 2, 3 (the sweep reference case)."""
    return MobilityGraph.from_edges(
        [("A", "B", 1.0), ("B", "C", 2.0), ("C", "A", 3.0)]
    )


@pytest.fixture
def small_registry():
    return NodeRegistry([
        NodeSite("A", "Alpha", 45.0, 2.0),
        NodeSite("B", "Beta", 45.5, 3.0),
        NodeSite("C", "Gamma", 46.0, 2.5),
        NodeSite("D", "Delta", 44.5, 3.5),
    ])


def record(origin, dest, ts, weight):
    return FlowRecord(origin, dest, ts, weight)
