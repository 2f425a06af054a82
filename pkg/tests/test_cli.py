import csv
import json
from pathlib import Path

import pytest

from mobnet.cli import main

FLOW_HEADER = "origin_id,destination_id,window_start,weight\n"
REG_HEADER = "region_id,name,lat,lon\n"


def run(*argv):
    return main([str(a) for a in argv])


def synth_dataset(tmp_path, archetype="star", nodes=13, size=3, seed=7):
    out = tmp_path / "data"
    code = run("synth", "--archetype", archetype, "--nodes", nodes,
               "--size", size, "--seed", seed, "--out", out)
    assert code == 0
    return out / "flows.csv", out / "registry.csv"


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestSynth:
    def test_writes_canonical_files(self, tmp_path):
        flows, registry = synth_dataset(tmp_path)
        assert read_csv(flows)[0] == FLOW_HEADER.strip().split(",")
        assert read_csv(registry)[0] == REG_HEADER.strip().split(",")
        assert len(read_csv(registry)) == 14  # header + 13 sites

    def test_deterministic_reruns(self, tmp_path):
        f1, r1 = synth_dataset(tmp_path / "a")
        f2, r2 = synth_dataset(tmp_path / "b")
        assert f1.read_bytes() == f2.read_bytes()
        assert r1.read_bytes() == r2.read_bytes()

    def test_below_minimum_fails(self, tmp_path, capsys):
        code = run("synth", "--archetype", "star", "--nodes", 3, "--size", 3,
                   "--out", tmp_path)
        assert code == 1
        assert "structural minimum" in capsys.readouterr().err

    def test_missing_params_fail(self, tmp_path):
        assert run("synth", "--archetype", "star", "--out", tmp_path) == 1


class TestMetrics:
    def test_three_day_dataset(self, tmp_path):
        flows = tmp_path / "flows.csv"
        rows = "".join(
            f"A,B,2020-03-0{d}T00:00:00Z,2\nB,A,2020-03-0{d}T08:00:00Z,1\n"
            for d in (1, 2, 3)
        )
        flows.write_text(FLOW_HEADER + rows)
        registry = tmp_path / "registry.csv"
        registry.write_text(REG_HEADER + "A,Alpha,45,2\nB,Beta,46,3\n")
        out = tmp_path / "out"
        assert run("metrics", "--flows", flows, "--registry", registry,
                   "--out", out) == 0

        connectivity = read_csv(out / "connectivity.csv")
        assert connectivity[0] == ["date", "num_wcc", "lwcc_size"]
        assert len(connectivity) == 4
        assert connectivity[1] == ["2020-03-01", "1", "2"]

        efficiency = read_csv(out / "efficiency.csv")
        assert efficiency[0] == ["date", "global_efficiency",
                                 "normalized_efficiency",
                                 "gini_nodal_efficiency"]
        assert len(efficiency) == 4

    def test_single_day_normalized_is_one(self, tmp_path):
        flows = tmp_path / "flows.csv"
        flows.write_text(FLOW_HEADER + "A,B,2020-03-01T00:00:00Z,2\n"
                                       "B,A,2020-03-01T00:00:00Z,2\n")
        registry = tmp_path / "registry.csv"
        registry.write_text(REG_HEADER + "A,Alpha,45,2\nB,Beta,46,3\n")
        out = tmp_path / "out"
        assert run("metrics", "--flows", flows, "--registry", registry,
                   "--out", out) == 0
        rows = read_csv(out / "efficiency.csv")
        assert [r[2] for r in rows[1:]] == ["1.0"]

    def test_missing_registry_file(self, tmp_path, capsys):
        flows = tmp_path / "flows.csv"
        flows.write_text(FLOW_HEADER)
        code = run("metrics", "--flows", flows,
                   "--registry", tmp_path / "nope.csv", "--out", tmp_path)
        assert code == 1
        assert "nope.csv" in capsys.readouterr().err

    def test_synthetic_pipeline(self, tmp_path):
        flows, registry = synth_dataset(tmp_path, nodes=20, size=3)
        out = tmp_path / "out"
        assert run("metrics", "--flows", flows, "--registry", registry,
                   "--out", out) == 0
        assert len(read_csv(out / "connectivity.csv")) == 29  # 28 days


class TestPercolate:
    def test_all_outputs_present(self, tmp_path):
        flows, registry = synth_dataset(tmp_path)
        out = tmp_path / "out"
        assert run("percolate", "--flows", flows, "--registry", registry,
                   "--lockdown-date", "2020-03-16", "--out", out) == 0
        names = {p.name for p in out.iterdir()}
        assert names == {
            "trace_increasing.csv", "trace_decreasing.csv",
            "persistence.csv", "overlay.csv", "persistence.geojson",
        }
        trace = read_csv(out / "trace_increasing.csv")
        assert trace[0] == ["direction", "iteration", "threshold",
                            "residual_edge_fraction", "lwcc_size", "num_wcc",
                            "global_efficiency"]
        doc = json.loads((out / "persistence.geojson").read_text())
        assert doc["type"] == "FeatureCollection"
        assert len(doc["features"]) == 13

    def test_single_direction(self, tmp_path):
        flows, registry = synth_dataset(tmp_path)
        out = tmp_path / "out"
        assert run("percolate", "--flows", flows, "--registry", registry,
                   "--lockdown-date", "2020-03-16",
                   "--direction", "increasing", "--out", out) == 0
        names = {p.name for p in out.iterdir()}
        assert "trace_increasing.csv" in names
        assert "trace_decreasing.csv" not in names

    def test_empty_prelockdown_window(self, tmp_path, capsys):
        flows, registry = synth_dataset(tmp_path)
        out = tmp_path / "out"
        code = run("percolate", "--flows", flows, "--registry", registry,
                   "--lockdown-date", "2019-01-01", "--out", out)
        assert code == 1
        assert "contains no flows" in capsys.readouterr().err

    def test_rerun_byte_identical(self, tmp_path):
        flows, registry = synth_dataset(tmp_path)
        outs = []
        for name in ("o1", "o2"):
            out = tmp_path / name
            assert run("percolate", "--flows", flows, "--registry", registry,
                       "--lockdown-date", "2020-03-16", "--out", out) == 0
            outs.append(out)
        for child in outs[0].iterdir():
            assert child.read_bytes() == (outs[1] / child.name).read_bytes()


class TestOther:
    def test_overlay_only(self, tmp_path):
        flows, registry = synth_dataset(tmp_path)
        out = tmp_path / "out"
        assert run("overlay", "--flows", flows, "--registry", registry,
                   "--lockdown-date", "2020-03-16", "--out", out) == 0
        rows = read_csv(out / "overlay.csv")
        assert rows[0] == ["period", "week_start", "residual_edge_fraction",
                           "lwcc_size", "normalized_efficiency"]
        assert [r[0] for r in rows[1:]] == ["before", "before", "during",
                                            "after"]

    def test_voronoi_command(self, tmp_path):
        flows, registry = synth_dataset(tmp_path)
        out = tmp_path / "out"
        assert run("voronoi", "--registry", registry, "--out", out) == 0
        doc = json.loads((out / "voronoi.geojson").read_text())
        assert len(doc["features"]) == 13

    def test_ingest_check(self, tmp_path, capsys):
        flows, registry = synth_dataset(tmp_path)
        assert run("ingest-check", "--flows", flows,
                   "--registry", registry) == 0
        assert "28 days" in capsys.readouterr().out

    def test_ingest_check_unknown_region(self, tmp_path, capsys):
        flows = tmp_path / "flows.csv"
        flows.write_text(FLOW_HEADER + "A,Z,2020-03-01T00:00:00Z,1\n")
        registry = tmp_path / "registry.csv"
        registry.write_text(REG_HEADER + "A,Alpha,45,2\n")
        assert run("ingest-check", "--flows", flows,
                   "--registry", registry) == 1
        assert "Z" in capsys.readouterr().err

    def test_config_file_with_flag_override(self, tmp_path):
        flows, registry = synth_dataset(tmp_path)
        config = tmp_path / "run.json"
        config.write_text(json.dumps({
            "flows": str(flows), "registry": str(registry),
            "lockdown_date": "2020-03-16",
            "out": str(tmp_path / "from_config"), "pre_days": 7,
        }))
        out = tmp_path / "flag_out"
        assert run("overlay", "--config", config, "--out", out) == 0
        assert (out / "overlay.csv").exists()
        assert not (tmp_path / "from_config").exists()

    def test_country_preset(self, tmp_path):
        flows, registry = synth_dataset(tmp_path)
        out = tmp_path / "out"
        assert run("percolate", "--flows", flows, "--registry", registry,
                   "--lockdown-date", "2020-03-16", "--country", "france",
                   "--direction", "increasing", "--out", out) == 0
