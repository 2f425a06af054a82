import io
from datetime import date

import numpy as np
import pytest

import oracles
from conftest import record, utc
from mobnet.graph import MobilityGraph, TimeWindow, build_graph
from mobnet.ingest import NodeRegistry, NodeSite
from mobnet.percolation import (
    OverlayPoint,
    empirical_overlay,
    node_persistence,
    percolation_sweep,
    write_overlay_csv,
    write_persistence_csv,
    write_trace_csv,
)


class TestSweepTriangle:
    def test_increasing(self, triangle):
        trace = percolation_sweep(triangle, "increasing")
        assert [s.lwcc_size for s in trace.steps] == [3, 3, 2, 0]
        assert [s.threshold for s in trace.steps] == [None, 1.0, 2.0, 3.0]
        assert [s.residual_edge_fraction for s in trace.steps] == [
            1.0, 2 / 3, 1 / 3, 0.0,
        ]

    def test_decreasing(self, triangle):
        trace = percolation_sweep(triangle, "decreasing")
        assert [s.lwcc_size for s in trace.steps] == [3, 3, 2, 0]
        assert [s.threshold for s in trace.steps] == [None, 3.0, 2.0, 1.0]

    def test_all_equal_weights_single_iteration(self):
        g = MobilityGraph.from_edges(
            [("A", "B", 2.0), ("B", "C", 2.0), ("C", "A", 2.0)]
        )
        trace = percolation_sweep(g, "increasing")
        assert trace.iteration_count == 1
        assert trace.steps[-1].residual_edge_fraction == 0.0

    def test_edgeless_rejected(self):
        with pytest.raises(ValueError):
            percolation_sweep(MobilityGraph.from_edges([]), "increasing")

    def test_unknown_direction(self, triangle):
        with pytest.raises(ValueError):
            percolation_sweep(triangle, "sideways")


class TestSweepInvariants:
    @pytest.mark.parametrize("direction", ["increasing", "decreasing"])
    def test_deletions_partition_edge_set(self, direction):
        rng = np.random.default_rng(17)
        edges = oracles.random_directed_graph(rng, max_nodes=15, edge_prob=0.3)
        g = MobilityGraph.from_edges(edges)
        trace = percolation_sweep(g, direction)
        residuals = [s.residual_edge_fraction for s in trace.steps]
        assert all(a > b for a, b in zip(residuals, residuals[1:]))
        assert residuals[-1] == 0.0
        assert trace.iteration_count == len(np.unique(g.weight))

    def test_direction_iteration_counts_match(self):
        rng = np.random.default_rng(23)
        edges = oracles.random_directed_graph(rng, max_nodes=12, edge_prob=0.4)
        g = MobilityGraph.from_edges(edges)
        inc = percolation_sweep(g, "increasing")
        dec = percolation_sweep(g, "decreasing")
        assert inc.iteration_count == dec.iteration_count

    def test_support_efficiency_mode(self, triangle):
        default = percolation_sweep(triangle, "increasing")
        support = percolation_sweep(triangle, "increasing",
                                    efficiency_nodes="support")
        assert default.steps[0].global_efficiency == \
            support.steps[0].global_efficiency
        # iteration 2 keeps only C->A: 2 support nodes out of 3
        d2, s2 = default.steps[2], support.steps[2]
        assert s2.global_efficiency == pytest.approx(3 * d2.global_efficiency)
        with pytest.raises(ValueError):
            percolation_sweep(triangle, "increasing", efficiency_nodes="other")

    def test_component_count_counts_isolated_nodes(self, triangle):
        trace = percolation_sweep(triangle, "increasing")
        # iteration 2 leaves only C->A; B is isolated but still counted
        assert trace.steps[2].component_count == 2
        assert trace.steps[3].component_count == 3


class TestPersistence:
    def test_triangle_increasing(self, triangle):
        rho = node_persistence(triangle, "increasing")
        assert rho == {"A": 1.0, "B": 0.5, "C": 1.0}

    def test_single_edge_degenerate(self):
        g = MobilityGraph.from_edges([("A", "B", 4.0)])
        assert node_persistence(g, "increasing") == {"A": 1.0, "B": 1.0}

    def test_outside_initial_lwcc_scores_zero(self):
        g = MobilityGraph.from_edges([
            ("A", "B", 1.0), ("B", "C", 2.0),   # initial LWCC
            ("X", "Y", 3.0),                     # separate pair
        ])
        rho = node_persistence(g, "increasing")
        # X,Y survive longest but score 0: they never were in the initial
        # LWCC. A drops out after iteration 1; B,C last appear there.
        assert rho == {"A": 0.0, "B": 0.5, "C": 0.5, "X": 0.0, "Y": 0.0}
        assert rho == oracles.resimulate_persistence(
            list(g.edge_tuples()), "increasing"
        )

    @pytest.mark.parametrize("direction", ["increasing", "decreasing"])
    def test_matches_resimulation(self, direction):
        rng = np.random.default_rng(29)
        for _ in range(15):
            edges = oracles.random_directed_graph(rng, max_nodes=14, edge_prob=0.25)
            if not edges:
                continue
            g = MobilityGraph.from_edges(edges)
            assert node_persistence(g, direction) == \
                oracles.resimulate_persistence(edges, direction)

    def test_values_quantized_by_weight_levels(self, triangle):
        rho = node_persistence(triangle, "increasing")
        assert len(set(rho.values())) <= len(np.unique(triangle.weight))


def overlay_fixture():
    registry = NodeRegistry([
        NodeSite(v, v, float(i), float(i)) for i, v in enumerate("ABCD")
    ])
    records = []
    # baseline week (Mon 2020-03-02): 4 edges daily
    for d in range(2, 9):
        for o, dd in (("A", "B"), ("B", "A"), ("C", "D"), ("B", "C")):
            records.append(record(o, dd, utc(2020, 3, d), 2.0))
    # lockdown week (Mon 2020-03-09): 2 edges
    for d in range(9, 16):
        for o, dd in (("A", "B"), ("B", "A")):
            records.append(record(o, dd, utc(2020, 3, d), 1.0))
    # after (Mon 2020-03-16): 1 edge
    for d in range(16, 23):
        records.append(record("A", "B", utc(2020, 3, d), 1.0))
    return registry, records


class TestOverlay:
    def test_periods_and_fractions(self):
        registry, records = overlay_fixture()
        baseline = TimeWindow(utc(2020, 3, 2), utc(2020, 3, 9))
        points = empirical_overlay(records, registry, date(2020, 3, 11), baseline)
        assert [p.period for p in points] == ["before", "during", "after"]
        assert points[0].week_start == date(2020, 3, 2)
        # baseline week equals the baseline graph
        assert points[0].residual_edge_fraction == 1.0
        assert points[0].normalized_efficiency == pytest.approx(1.0)
        assert points[1].residual_edge_fraction == 0.5
        assert points[2].residual_edge_fraction == 0.25
        assert points[0].lwcc_size == 4

    def test_baseline_must_precede_lockdown(self):
        registry, records = overlay_fixture()
        baseline = TimeWindow(utc(2020, 3, 2), utc(2020, 3, 9))
        with pytest.raises(ValueError):
            empirical_overlay(records, registry, date(2020, 3, 5), baseline)

    def test_empty_baseline_rejected(self):
        registry, records = overlay_fixture()
        baseline = TimeWindow(utc(2020, 1, 1), utc(2020, 1, 8))
        with pytest.raises(ValueError, match="no flows"):
            empirical_overlay(records, registry, date(2020, 3, 11), baseline)


class TestWriters:
    def test_trace_csv_schema(self, triangle):
        trace = percolation_sweep(triangle, "increasing")
        buffer = io.StringIO()
        write_trace_csv([trace], buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == ("direction,iteration,threshold,"
                            "residual_edge_fraction,lwcc_size,num_wcc,"
                            "global_efficiency")
        assert lines[1].startswith("increasing,0,,1.0,3,1,")
        assert len(lines) == 1 + len(trace.steps)

    def test_persistence_csv(self, triangle):
        buffer = io.StringIO()
        write_persistence_csv(node_persistence(triangle, "increasing"), buffer)
        assert buffer.getvalue().splitlines() == [
            "region_id,persistence", "A,1.0", "B,0.5", "C,1.0",
        ]

    def test_overlay_csv(self):
        point = OverlayPoint("during", date(2020, 3, 9), 0.5, 2, 0.25)
        buffer = io.StringIO()
        write_overlay_csv([point], buffer)
        assert buffer.getvalue().splitlines() == [
            "period,week_start,residual_edge_fraction,lwcc_size,"
            "normalized_efficiency",
            "during,2020-03-09,0.5,2,0.25",
        ]
