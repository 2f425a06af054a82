"""Weighted directed mobility graphs over aggregation windows.

A :class:`MobilityGraph` keeps one edge per ordered node pair (the
aggregate of all in-window flows between the pair), strictly positive
weights, and no self-loops. Its node set is the *support*: registry
nodes incident to at least one surviving edge. All connectivity is weak
(direction-blind).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ValidationError
from .ingest import FlowRecord, NodeRegistry, format_timestamp

GRAPH_HEADER = ("origin_id", "destination_id", "weight")
COMPONENTS_HEADER = ("date", "num_wcc", "lwcc_size")


@dataclass(frozen=True)
class TimeWindow:
    """Half-open UTC interval ``[start, end)``."""

    start: datetime
    end: datetime

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError(f"empty window: start {self.start} >= end {self.end}")

    def __contains__(self, ts: datetime) -> bool:
        return self.start <= ts < self.end


def day_window(day: date) -> TimeWindow:
    """The 24-hour UTC window of one calendar day."""
    start = datetime.combine(day, time(0), tzinfo=timezone.utc)
    return TimeWindow(start, start + timedelta(days=1))


def week_window(day: date) -> TimeWindow:
    """The ISO calendar week (Monday start) containing ``day``."""
    monday = day - timedelta(days=day.weekday())
    start = datetime.combine(monday, time(0), tzinfo=timezone.utc)
    return TimeWindow(start, start + timedelta(days=7))


def prepost_windows(lockdown_date: date, pre_days: int, post_days: int):
    """Symmetric disjoint aggregation windows around an intervention day.

    ``pre`` covers the ``pre_days`` days before the lockdown date and
    ``post`` the ``post_days`` days after it; the lockdown day itself
    belongs to neither.
    """
    if pre_days < 1 or post_days < 1:
        raise ValueError("window lengths must be >= 1 day")
    lockdown = datetime.combine(lockdown_date, time(0), tzinfo=timezone.utc)
    pre = TimeWindow(lockdown - timedelta(days=pre_days), lockdown)
    day_after = lockdown + timedelta(days=1)
    post = TimeWindow(day_after, day_after + timedelta(days=post_days))
    return pre, post


@dataclass(frozen=True, eq=False)
class MobilityGraph:
    """Immutable weighted directed graph over its support nodes.

    ``node_ids`` lists the support in registry order; ``src``/``dst``
    hold edge endpoints as indices into it, sorted by (src, dst).
    """

    node_ids: tuple
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    window: TimeWindow | None = None

    def __post_init__(self):
        for arr in (self.src, self.dst, self.weight):
            arr.flags.writeable = False
        object.__setattr__(
            self, "node_index", {rid: i for i, rid in enumerate(self.node_ids)}
        )

    @property
    def node_count(self) -> int:
        return len(self.node_ids)

    @property
    def edge_count(self) -> int:
        return len(self.weight)

    def edge_tuples(self):
        """Yield ``(origin_id, destination_id, weight)`` in stored order."""
        for s, d, w in zip(self.src, self.dst, self.weight):
            yield self.node_ids[s], self.node_ids[d], float(w)

    @classmethod
    def from_arrays(cls, node_ids, src, dst, weight, window=None):
        """Canonicalize raw edge arrays (sort by endpoint pair)."""
        node_ids = tuple(node_ids)
        src = np.asarray(src, dtype=np.int32)
        dst = np.asarray(dst, dtype=np.int32)
        weight = np.asarray(weight, dtype=np.float64)
        order = np.lexsort((dst, src))
        return cls(node_ids, src[order].copy(), dst[order].copy(),
                   weight[order].copy(), window)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], window=None) -> "MobilityGraph":
        """Build a graph from ``(origin_id, destination_id, weight)`` tuples.

        Parallel edges are summed; self-loops and zero-total edges are
        dropped, mirroring :func:`build_graph`. Node order is first
        appearance.
        """
        totals: dict = {}
        seen: dict = {}
        for origin, dest, w in edges:
            if w < 0:
                raise ValidationError(f"negative edge weight {w}")
            for rid in (origin, dest):
                if rid not in seen:
                    seen[rid] = len(seen)
            if origin == dest:
                continue
            totals[(origin, dest)] = totals.get((origin, dest), 0.0) + float(w)
        return _assemble(list(seen), totals, window)


def _assemble(candidate_ids: Sequence[str], totals: dict, window) -> MobilityGraph:
    """Shared tail of graph construction: drop zero totals, restrict the
    node set to the support, emit canonical arrays."""
    kept = {pair: w for pair, w in totals.items() if w > 0.0}
    support = {rid for pair in kept for rid in pair}
    node_ids = tuple(rid for rid in candidate_ids if rid in support)
    index = {rid: i for i, rid in enumerate(node_ids)}
    src = np.fromiter((index[o] for o, _ in kept), dtype=np.int32, count=len(kept))
    dst = np.fromiter((index[d] for _, d in kept), dtype=np.int32, count=len(kept))
    weight = np.fromiter(kept.values(), dtype=np.float64, count=len(kept))
    return MobilityGraph.from_arrays(node_ids, src, dst, weight, window)


def build_graph(records: Sequence[FlowRecord], window: TimeWindow,
                registry: NodeRegistry) -> MobilityGraph:
    """Aggregate in-window flows into one edge per ordered node pair.

    The weight of edge (A, B) is the sum of all in-window record weights
    A->B. Self-loop records and zero-total edges are dropped. Records
    inside the window must reference registered regions.
    """
    totals: dict = {}
    for record in records:
        if record.window_start not in window:
            continue
        for rid in (record.origin_id, record.destination_id):
            if rid not in registry:
                raise ValidationError(f"unknown region '{rid}' in flow records")
        if record.origin_id == record.destination_id:
            continue
        pair = (record.origin_id, record.destination_id)
        totals[pair] = totals.get(pair, 0.0) + record.weight
    return _assemble(registry.region_ids, totals, window)


def daily_series(records: Sequence[FlowRecord],
                 registry: NodeRegistry) -> list:
    """One graph per UTC calendar day with at least one record, ascending."""
    by_day: dict = {}
    for record in records:
        by_day.setdefault(record.window_start.date(), []).append(record)
    return [
        build_graph(by_day[day], day_window(day), registry)
        for day in sorted(by_day)
    ]


@dataclass(frozen=True, eq=False)
class ComponentLabeling:
    """Weakly connected components of a graph's support nodes."""

    labels: np.ndarray
    component_count: int
    lwcc_id: int
    lwcc_size: int

    def lwcc_mask(self) -> np.ndarray:
        return self.labels == self.lwcc_id


def weak_components(graph: MobilityGraph) -> ComponentLabeling:
    """Label weak components; the LWCC is the largest one, ties broken
    toward the component holding the lexicographically smallest id."""
    n = graph.node_count
    if n == 0:
        return ComponentLabeling(np.empty(0, dtype=np.int32), 0, -1, 0)
    count, labels = _component_labels(n, graph.src, graph.dst)
    lwcc_id, lwcc_size = _largest_component(labels, count, graph.node_ids)
    return ComponentLabeling(labels, int(count), lwcc_id, lwcc_size)


def _component_labels(n, src, dst):
    matrix = csr_matrix(
        (np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n)
    )
    return connected_components(matrix, directed=True, connection="weak")


def _largest_component(labels, count, node_ids):
    sizes = np.bincount(labels, minlength=count)
    largest = sizes.max()
    tied = np.flatnonzero(sizes == largest)
    if len(tied) == 1:
        return int(tied[0]), int(largest)
    ids = np.asarray(node_ids)
    candidates = np.flatnonzero(np.isin(labels, tied))
    winner = labels[min(candidates, key=lambda i: ids[i])]
    return int(winner), int(largest)


def residual_edge_fraction(graph: MobilityGraph, baseline: MobilityGraph,
                           mode: str = "count") -> float:
    """Edges of ``graph`` relative to ``baseline``.

    ``mode="count"`` compares edge counts (the default reading);
    ``mode="weight"`` compares total weight mass.
    """
    if baseline.edge_count == 0:
        raise ValueError("baseline graph has no edges")
    if mode == "count":
        return graph.edge_count / baseline.edge_count
    if mode == "weight":
        return float(graph.weight.sum() / baseline.weight.sum())
    raise ValueError(f"unknown mode '{mode}', expected 'count' or 'weight'")


def write_graph_csv(graph: MobilityGraph, path: Union[str, Path]):
    """Write the edge list plus a sidecar JSON with window and counts."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(GRAPH_HEADER)
        for origin, dest, w in graph.edge_tuples():
            writer.writerow((origin, dest, repr(w)))
    sidecar = {
        "window_start": format_timestamp(graph.window.start) if graph.window else None,
        "window_end": format_timestamp(graph.window.end) if graph.window else None,
        "node_count": graph.node_count,
        "edge_count": graph.edge_count,
    }
    path.with_suffix(".json").write_text(
        json.dumps(sidecar, indent=2) + "\n", encoding="utf-8"
    )


def write_components_csv(rows: Iterable[tuple], target: Union[str, Path, IO[str]]):
    """Write ``(date, num_wcc, lwcc_size)`` rows under the canonical header."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_components_csv(rows, fh)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(COMPONENTS_HEADER)
    for day, num_wcc, lwcc_size in rows:
        writer.writerow((day.isoformat(), num_wcc, lwcc_size))
