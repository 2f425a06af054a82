"""Weight-ordered bond percolation, node persistence, and weekly overlays.

A sweep walks the sorted distinct edge weights ``w_1 < ... < w_K`` of a
graph. At iteration ``i`` the *increasing* strategy deletes every edge
with weight <= ``w_i`` (weakest flows first); the *decreasing* strategy
deletes every edge with weight >= ``w_(K+1-i)``. Either way the final
iteration empties the graph.

Per-iteration statistics follow deliberate node-set conventions:

* ``lwcc_size`` is measured on the residual support (nodes still
  incident to an edge), so a fully dismantled graph reports LWCC size 0;
* ``component_count`` is measured over the full original node set, so
  nodes isolated by the sweep count as singleton components (the usual
  percolation-cluster reading, and the one that lets a star network show
  more components than its largest component holds);
* ``global_efficiency`` averages pairwise efficiencies over the original
  node set by default (``efficiency_nodes="original"``), which keeps it
  exactly non-increasing along the sweep; ``efficiency_nodes="support"``
  averages over the residual support instead, which rescales each
  iteration by its support size and is not monotone in general.

Node persistence scores how long a node stays inside the LWCC: with K
distinct weights, ``persistence = M / (K - 1)`` where M is the last
iteration at which the node still belonged to the LWCC. Nodes outside
the initial LWCC score 0; when K == 1 the initial LWCC members score 1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .graph import (
    MobilityGraph,
    NodeRegistry,
    TimeWindow,
    _component_labels,
    _largest_component,
    build_graph,
    week_window,
)
from .ingest import FlowRecord
from .metrics import efficiency_from_arrays, efficiency_sum

DIRECTIONS = ("increasing", "decreasing")

TRACE_HEADER = (
    "direction", "iteration", "threshold", "residual_edge_fraction",
    "lwcc_size", "num_wcc", "global_efficiency",
)
PERSISTENCE_HEADER = ("region_id", "persistence")
OVERLAY_HEADER = (
    "period", "week_start", "residual_edge_fraction", "lwcc_size",
    "normalized_efficiency",
)


@dataclass(frozen=True)
class PercolationStep:
    """Statistics of the residual graph after one sweep iteration.

    Iteration 0 is the untouched input graph (threshold ``None``).
    """

    iteration: int
    threshold: float | None
    residual_edge_fraction: float
    lwcc_size: int
    component_count: int
    global_efficiency: float


@dataclass(frozen=True)
class PercolationTrace:
    direction: str
    steps: tuple

    @property
    def iteration_count(self) -> int:
        """Number of deletion iterations (excludes the initial snapshot)."""
        return len(self.steps) - 1


@dataclass(frozen=True)
class OverlayPoint:
    """One weekly empirical network placed against the sweep curves."""

    period: str
    week_start: date
    residual_edge_fraction: float
    lwcc_size: int
    normalized_efficiency: float


def _check_direction(direction: str):
    if direction not in DIRECTIONS:
        raise ValueError(
            f"unknown direction '{direction}', expected one of {DIRECTIONS}"
        )


def _residual_stats(graph, mask, node_ids_arr, with_efficiency, support_eff):
    """(lwcc_size, component_count, efficiency, lwcc member indices)."""
    n_total = graph.node_count
    sub_src = graph.src[mask]
    sub_dst = graph.dst[mask]
    support = np.union1d(sub_src, sub_dst)
    isolated = n_total - len(support)
    if len(support) == 0:
        return 0, isolated, 0.0, support

    rs = np.searchsorted(support, sub_src).astype(np.int32)
    rd = np.searchsorted(support, sub_dst).astype(np.int32)
    count, labels = _component_labels(len(support), rs, rd)
    lwcc_id, lwcc_size = _largest_component(
        labels, count, node_ids_arr[support]
    )
    members = support[labels == lwcc_id]

    eff = 0.0
    if with_efficiency and len(support) >= 2:
        # Pairs involving isolated nodes contribute exactly 0, so the
        # sum can always be taken on the (cheaper) support subgraph.
        pair_sum = efficiency_sum(len(support), rs, rd, graph.weight[mask])
        n_eff = len(support) if support_eff else n_total
        eff = pair_sum / (n_eff * (n_eff - 1))
    return lwcc_size, count + isolated, eff, members


def _sweep(graph: MobilityGraph, direction: str, with_efficiency: bool,
           support_eff: bool = False):
    """Run one sweep; yields (step, lwcc member indices) per iteration."""
    _check_direction(direction)
    if graph.edge_count == 0:
        raise ValueError("percolation needs a graph with at least one edge")

    node_ids_arr = np.asarray(graph.node_ids)
    weights = graph.weight
    thresholds = np.unique(weights)  # ascending
    if direction == "decreasing":
        thresholds = thresholds[::-1]

    full = np.ones(graph.edge_count, dtype=bool)
    lwcc, count, eff, members = _residual_stats(
        graph, full, node_ids_arr, with_efficiency, support_eff
    )
    yield PercolationStep(0, None, 1.0, lwcc, count, eff), members

    for i, threshold in enumerate(thresholds, start=1):
        if direction == "increasing":
            mask = weights > threshold
        else:
            mask = weights < threshold
        lwcc, count, eff, members = _residual_stats(
            graph, mask, node_ids_arr, with_efficiency, support_eff
        )
        step = PercolationStep(
            i, float(threshold), float(mask.sum() / graph.edge_count),
            lwcc, count, eff,
        )
        yield step, members


def percolation_sweep(graph: MobilityGraph, direction: str,
                      efficiency_nodes: str = "original") -> PercolationTrace:
    """Full weight-ordered sweep with per-iteration statistics.

    ``efficiency_nodes`` picks the averaging node set for the efficiency
    column: ``"original"`` (default, exactly non-increasing) or
    ``"support"`` (residual support only).
    """
    if efficiency_nodes not in ("original", "support"):
        raise ValueError(
            f"efficiency_nodes must be 'original' or 'support', "
            f"got '{efficiency_nodes}'"
        )
    steps = tuple(
        step
        for step, _ in _sweep(
            graph, direction, True, support_eff=(efficiency_nodes == "support")
        )
    )
    return PercolationTrace(direction, steps)


def node_persistence(graph: MobilityGraph, direction: str) -> dict:
    """Persistence score in [0, 1] per region id of the graph."""
    runs = _sweep(graph, direction, False)
    _, initial_members = next(runs)
    in_initial = np.zeros(graph.node_count, dtype=bool)
    in_initial[initial_members] = True

    last_in_lwcc = np.zeros(graph.node_count, dtype=np.int64)
    iterations = 0
    for step, members in runs:
        iterations = step.iteration
        last_in_lwcc[members] = step.iteration

    if iterations == 1:  # single weight class: members of the initial LWCC keep 1
        rho = in_initial.astype(np.float64)
    else:
        rho = np.where(in_initial, last_in_lwcc / (iterations - 1), 0.0)
    return {rid: float(r) for rid, r in zip(graph.node_ids, rho)}


def empirical_overlay(records: Sequence[FlowRecord], registry: NodeRegistry,
                      lockdown_date: date,
                      baseline_window: TimeWindow) -> list:
    """Weekly empirical statistics relative to a pre-lockdown baseline.

    The baseline aggregate stands in for the network under standard
    conditions; each ISO week with data yields one point labeled
    before/during/after by its position relative to the lockdown date.
    """
    lockdown_start = datetime.combine(lockdown_date, time(0), tzinfo=timezone.utc)
    if baseline_window.end > lockdown_start:
        raise ValueError("baseline window must precede the lockdown date")

    baseline = build_graph(records, baseline_window, registry)
    if baseline.edge_count == 0:
        raise ValueError("baseline window contains no flows")
    baseline_eff, _ = efficiency_from_arrays(
        baseline.node_count, baseline.src, baseline.dst, baseline.weight
    )

    weeks = sorted({week_window(r.window_start.date()).start for r in records})
    points = []
    for week_start in weeks:
        window = TimeWindow(week_start, week_start + timedelta(days=7))
        weekly = build_graph(records, window, registry)
        if lockdown_start in window:
            period = "during"
        elif window.end <= lockdown_start:
            period = "before"
        else:
            period = "after"
        eff = 0.0
        if weekly.node_count >= 2:
            eff, _ = efficiency_from_arrays(
                weekly.node_count, weekly.src, weekly.dst, weekly.weight
            )
        lwcc = 0
        if weekly.node_count:
            _, labels = _component_labels(
                weekly.node_count, weekly.src, weekly.dst
            )
            lwcc = int(np.bincount(labels).max())
        points.append(
            OverlayPoint(
                period,
                week_start.date(),
                weekly.edge_count / baseline.edge_count,
                lwcc,
                eff / baseline_eff,
            )
        )
    return points


def write_trace_csv(traces: Iterable[PercolationTrace],
                    target: Union[str, Path, IO[str]]):
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_trace_csv(traces, fh)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for trace in traces:
        for s in trace.steps:
            writer.writerow((
                trace.direction,
                s.iteration,
                "" if s.threshold is None else repr(s.threshold),
                repr(s.residual_edge_fraction),
                s.lwcc_size,
                s.component_count,
                repr(s.global_efficiency),
            ))


def write_persistence_csv(persistence: dict, target: Union[str, Path, IO[str]]):
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_persistence_csv(persistence, fh)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(PERSISTENCE_HEADER)
    for rid, rho in persistence.items():
        writer.writerow((rid, repr(rho)))


def write_overlay_csv(points: Iterable[OverlayPoint],
                      target: Union[str, Path, IO[str]]):
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_overlay_csv(points, fh)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(OVERLAY_HEADER)
    for p in points:
        writer.writerow((
            p.period,
            p.week_start.isoformat(),
            repr(p.residual_edge_fraction),
            p.lwcc_size,
            repr(p.normalized_efficiency),
        ))
