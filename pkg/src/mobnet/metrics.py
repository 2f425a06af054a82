"""Shortest-path efficiency measures and the Gini heterogeneity index.

Distance between nodes is flow-based: traversing an edge of weight ``w``
costs ``1/w``, so heavier flows bring nodes closer. The efficiency of an
ordered pair is the reciprocal shortest-path distance (zero when
unreachable); global efficiency averages this over all ordered pairs of
the graph's support nodes, and nodal efficiency is one node's average
reciprocal distance to all others. Raw global efficiency of a weighted
graph is not capped at 1; use :func:`normalize_series` for time-series
display.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import ValidationError
from .graph import MobilityGraph

EFFICIENCY_HEADER = (
    "date", "global_efficiency", "normalized_efficiency", "gini_nodal_efficiency"
)
NODAL_HEADER = ("region_id", "nodal_efficiency")


@dataclass(frozen=True, eq=False)
class DistanceRow:
    """Single-source shortest distances; unreachable nodes are +inf."""

    source: int
    distances: np.ndarray


@dataclass(frozen=True, eq=False)
class EfficiencyReport:
    """Global efficiency and the per-node contributions to it."""

    global_efficiency: float
    nodal: np.ndarray


def _length_matrix(n: int, src, dst, weight) -> csr_matrix:
    return csr_matrix((1.0 / np.asarray(weight), (src, dst)), shape=(n, n))


def shortest_paths_from(graph: MobilityGraph, source: int) -> DistanceRow:
    """Directed shortest distances from ``source`` under 1/weight lengths."""
    if not 0 <= source < graph.node_count:
        raise ValueError(
            f"source index {source} out of range for {graph.node_count} nodes"
        )
    matrix = _length_matrix(graph.node_count, graph.src, graph.dst, graph.weight)
    distances = dijkstra(matrix, directed=True, indices=source)
    return DistanceRow(source, distances)


def _pair_efficiencies(n: int, src, dst, weight) -> np.ndarray:
    """Matrix of reciprocal shortest distances; 0 on the diagonal and for
    unreachable pairs.

    Uses Dijkstra throughout: a computed distance is the minimum over
    surviving paths of their left-to-right float sums, which makes every
    entry exactly non-increasing under edge deletion.
    """
    matrix = _length_matrix(n, src, dst, weight)
    dist = dijkstra(matrix, directed=True)
    with np.errstate(divide="ignore"):
        inv = np.where(np.isfinite(dist), 1.0 / dist, 0.0)
    np.fill_diagonal(inv, 0.0)
    return inv


def efficiency_from_arrays(n: int, src, dst, weight):
    """(global, nodal) efficiencies for a graph given as edge arrays."""
    inv = _pair_efficiencies(n, src, dst, weight)
    row_sums = inv.sum(axis=1)
    nodal = row_sums / (n - 1)
    global_eff = float(row_sums.sum() / (n * (n - 1)))
    return global_eff, nodal


def efficiency_sum(n: int, src, dst, weight) -> float:
    """Correctly rounded sum of pairwise efficiencies over ordered pairs.

    ``math.fsum`` makes the value independent of summation order, so the
    sum inherits exact monotonicity under edge deletion from the
    individual pair efficiencies (sweeps rely on this).
    """
    inv = _pair_efficiencies(n, src, dst, weight)
    return math.fsum(inv[inv > 0.0])


def efficiency(graph: MobilityGraph) -> EfficiencyReport:
    """Global and nodal efficiency over the graph's support nodes."""
    n = graph.node_count
    if n < 2:
        raise ValueError(f"efficiency needs at least 2 nodes, graph has {n}")
    global_eff, nodal = efficiency_from_arrays(
        n, graph.src, graph.dst, graph.weight
    )
    return EfficiencyReport(global_eff, nodal)


def normalize_series(values: Sequence[float]) -> np.ndarray:
    """Divide a series by its maximum (time-series display convention)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot normalize an empty series")
    if np.any(arr < 0):
        raise ValidationError("normalize_series expects non-negative values")
    peak = arr.max()
    if peak <= 0:
        raise ValueError("series has no strictly positive value")
    return arr / peak


def gini(values: Sequence[float]) -> float:
    """Half the relative mean absolute difference of a vector.

    0 signals equality; the maximum for n non-negative entries is
    (n-1)/n. Computed via the sorted-rank form of the double sum.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("gini expects a non-empty 1-d vector")
    if np.any(arr < 0):
        raise ValidationError("gini is defined for non-negative values only")
    ranked = np.sort(arr)  # all arithmetic on the sorted array keeps the
    n = arr.size           # result exactly permutation-invariant
    total = ranked.sum()
    if total <= 0:
        raise ValueError("gini undefined for a zero-mean vector")
    coeffs = 2.0 * np.arange(1, n + 1) - n - 1
    return float(np.dot(coeffs, ranked) / (n * total))


def efficiency_gini_series(graphs: Sequence[MobilityGraph]) -> list:
    """Per-graph ``(global efficiency, gini of nodal efficiency)`` pairs."""
    out = []
    for graph in graphs:
        report = efficiency(graph)
        out.append((report.global_efficiency, gini(report.nodal)))
    return out


def write_efficiency_csv(rows: Iterable[tuple], target: Union[str, Path, IO[str]]):
    """Write ``(date, global, normalized, gini)`` rows."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_efficiency_csv(rows, fh)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(EFFICIENCY_HEADER)
    for day, glob, norm, g in rows:
        writer.writerow(
            (day.isoformat(), repr(float(glob)), repr(float(norm)), repr(float(g)))
        )


def write_nodal_csv(graph: MobilityGraph, report: EfficiencyReport,
                    target: Union[str, Path, IO[str]]):
    """Write per-node efficiency contributions."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_nodal_csv(graph, report, fh)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(NODAL_HEADER)
    for rid, value in zip(graph.node_ids, report.nodal):
        writer.writerow((rid, repr(float(value))))
