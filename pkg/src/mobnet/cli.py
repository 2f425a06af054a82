"""Command-line pipeline orchestration.

Subcommands: ``synth``, ``ingest-check``, ``metrics``, ``percolate``,
``overlay``, ``voronoi``. Options may come from flags or from a JSON
config file (``--config``); flags win. Exit codes: 0 success, 1 parse or
validation error, 2 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from . import geo, graph, ingest, metrics, percolation, synth
from .errors import MobnetError

#: Pre/post aggregation window length in days, per national lockdown study.
COUNTRY_WINDOW_DAYS = {"france": 12, "uk": 13, "italy": 14}
DEFAULT_WINDOW_DAYS = 14


@dataclass
class RunConfig:
    """Merged flag/file configuration of one pipeline run."""

    flows: Path | None = None
    registry: Path | None = None
    lockdown_date: date | None = None
    pre_days: int = DEFAULT_WINDOW_DAYS
    post_days: int = DEFAULT_WINDOW_DAYS
    direction: str = "both"
    out: Path = Path(".")
    seed: int = 0

    def __post_init__(self):
        if self.pre_days < 1 or self.post_days < 1:
            raise ValueError("window lengths must be >= 1 day")
        if self.direction not in ("increasing", "decreasing", "both"):
            raise ValueError(f"unknown direction '{self.direction}'")

    @property
    def directions(self):
        if self.direction == "both":
            return ("increasing", "decreasing")
        return (self.direction,)


def _load_config_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return data


def _merge_config(args) -> RunConfig:
    """Flags override config-file values override defaults."""
    file_values = _load_config_file(args.config) if args.config else {}
    country = _pick("country", args, file_values, None)
    window_default = COUNTRY_WINDOW_DAYS.get(country, DEFAULT_WINDOW_DAYS)

    lockdown = _pick("lockdown_date", args, file_values, None)
    if isinstance(lockdown, str):
        lockdown = date.fromisoformat(lockdown)
    flows = _pick("flows", args, file_values, None)
    registry = _pick("registry", args, file_values, None)
    return RunConfig(
        flows=Path(flows) if flows else None,
        registry=Path(registry) if registry else None,
        lockdown_date=lockdown,
        pre_days=int(_pick("pre_days", args, file_values, window_default)),
        post_days=int(_pick("post_days", args, file_values, window_default)),
        direction=_pick("direction", args, file_values, "both"),
        out=Path(_pick("out", args, file_values, ".")),
        seed=int(_pick("seed", args, file_values, 0)),
    )


def _pick(key, args, file_values, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in file_values and file_values[key] is not None:
        return file_values[key]
    return default


def _require(config, *fields):
    for field in fields:
        if getattr(config, field) is None:
            raise ValueError(f"missing required option --{field.replace('_', '-')}")


def _load_inputs(config):
    records = ingest.parse_flow_records(config.flows)
    registry = ingest.parse_node_registry(config.registry)
    return records, registry


def _outdir(config) -> Path:
    config.out.mkdir(parents=True, exist_ok=True)
    return config.out


def cmd_metrics(args) -> int:
    config = _merge_config(args)
    _require(config, "flows", "registry")
    records, registry = _load_inputs(config)
    out = _outdir(config)

    series = graph.daily_series(records, registry)
    connectivity_rows = []
    measurable = []
    for g in series:
        labeling = graph.weak_components(g)
        day = g.window.start.date()
        connectivity_rows.append((day, labeling.component_count, labeling.lwcc_size))
        if g.node_count >= 2:
            measurable.append((day, g))
    graph.write_components_csv(connectivity_rows, out / "connectivity.csv")

    pairs = metrics.efficiency_gini_series([g for _, g in measurable])
    normalized = metrics.normalize_series([glob for glob, _ in pairs])
    metrics.write_efficiency_csv(
        (
            (day, glob, norm, g_idx)
            for (day, _), (glob, g_idx), norm in zip(measurable, pairs, normalized)
        ),
        out / "efficiency.csv",
    )
    print(f"wrote {out / 'connectivity.csv'} ({len(connectivity_rows)} days)")
    print(f"wrote {out / 'efficiency.csv'} ({len(pairs)} days)")
    return 0


def cmd_percolate(args) -> int:
    config = _merge_config(args)
    _require(config, "flows", "registry", "lockdown_date")
    records, registry = _load_inputs(config)
    out = _outdir(config)

    pre_window, _ = graph.prepost_windows(
        config.lockdown_date, config.pre_days, config.post_days
    )
    baseline = graph.build_graph(records, pre_window, registry)
    if baseline.edge_count == 0:
        raise ValueError(
            f"pre-lockdown window [{pre_window.start:%Y-%m-%d}, "
            f"{pre_window.end:%Y-%m-%d}) contains no flows"
        )

    for direction in config.directions:
        trace = percolation.percolation_sweep(baseline, direction)
        path = out / f"trace_{direction}.csv"
        percolation.write_trace_csv([trace], path)
        print(f"wrote {path} ({trace.iteration_count} iterations)")

    persistence = percolation.node_persistence(baseline, "increasing")
    percolation.write_persistence_csv(persistence, out / "persistence.csv")

    points = percolation.empirical_overlay(
        records, registry, config.lockdown_date, pre_window
    )
    percolation.write_overlay_csv(points, out / "overlay.csv")

    cells = geo.voronoi(registry)
    document = geo.export_persistence_geojson(cells, persistence)
    geo.write_geojson(document, out / "persistence.geojson")
    print(f"wrote {out / 'persistence.csv'}, {out / 'overlay.csv'}, "
          f"{out / 'persistence.geojson'}")
    return 0


def cmd_overlay(args) -> int:
    config = _merge_config(args)
    _require(config, "flows", "registry", "lockdown_date")
    records, registry = _load_inputs(config)
    out = _outdir(config)

    pre_window, _ = graph.prepost_windows(
        config.lockdown_date, config.pre_days, config.post_days
    )
    points = percolation.empirical_overlay(
        records, registry, config.lockdown_date, pre_window
    )
    percolation.write_overlay_csv(points, out / "overlay.csv")
    print(f"wrote {out / 'overlay.csv'} ({len(points)} weeks)")
    return 0


def cmd_synth(args) -> int:
    config = _merge_config(args)
    kwargs = {
        "star": "hub_count", "multi_cluster": "cluster_count",
        "core_periphery": "core_size",
    }
    if args.archetype is None or args.nodes is None or args.size is None:
        raise ValueError("synth requires --archetype, --nodes and --size")
    params = synth.ArchetypeParams(
        archetype=args.archetype,
        node_count=args.nodes,
        weight_scale=args.weight_scale,
        seed=config.seed,
        **{kwargs[args.archetype]: args.size},
    )
    registry, records = synth.generate_synthetic(params)
    out = _outdir(config)
    ingest.write_registry_csv(registry, out / "registry.csv")
    ingest.write_flow_csv(records, out / "flows.csv")
    print(f"wrote {out / 'registry.csv'} ({len(registry)} sites)")
    print(f"wrote {out / 'flows.csv'} ({len(records)} records, "
          f"{synth.SYNTH_SPAN_DAYS} days from {synth.SYNTH_START_DAY}, "
          f"lockdown {synth.SYNTH_LOCKDOWN_DATE})")
    return 0


def cmd_voronoi(args) -> int:
    config = _merge_config(args)
    _require(config, "registry")
    registry = ingest.parse_node_registry(config.registry)
    persistence = {}
    if args.persistence:
        persistence = _read_persistence_csv(args.persistence)
    out = _outdir(config)
    cells = geo.voronoi(registry)
    document = geo.export_persistence_geojson(cells, persistence)
    geo.write_geojson(document, out / "voronoi.geojson")
    print(f"wrote {out / 'voronoi.geojson'} ({len(cells)} cells)")
    return 0


def _read_persistence_csv(path):
    import csv as _csv

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = _csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != percolation.PERSISTENCE_HEADER:
            raise ValueError(
                f"persistence CSV header must be "
                f"'{','.join(percolation.PERSISTENCE_HEADER)}'"
            )
        return {rid: float(rho) for rid, rho in reader}


def cmd_ingest_check(args) -> int:
    config = _merge_config(args)
    _require(config, "flows", "registry")
    records, registry = _load_inputs(config)
    unknown = sorted({
        rid
        for r in records
        for rid in (r.origin_id, r.destination_id)
        if rid not in registry
    })
    if unknown:
        raise ValueError(
            f"{len(unknown)} region ids missing from registry: "
            + ", ".join(unknown[:10])
        )
    days = {r.window_start.date() for r in records}
    total = sum(r.weight for r in records)
    print(f"{len(records)} flow records over {len(days)} days, "
          f"{len(registry)} registered sites, total weight {total:.6g}")
    if records:
        print(f"span: {min(days)} .. {max(days)}")
    return 0


def _add_common(parser):
    parser.add_argument("--flows", help="flow CSV path")
    parser.add_argument("--registry", help="node registry CSV path")
    parser.add_argument("--lockdown-date", dest="lockdown_date",
                        help="ISO date of the intervention (UTC)")
    parser.add_argument("--pre-days", dest="pre_days", type=int,
                        help="pre-lockdown window length in days")
    parser.add_argument("--post-days", dest="post_days", type=int,
                        help="post-lockdown window length in days")
    parser.add_argument("--country", choices=sorted(COUNTRY_WINDOW_DAYS),
                        help="convenience preset for window lengths "
                             "(france=12, uk=13, italy=14)")
    parser.add_argument("--direction",
                        choices=("increasing", "decreasing", "both"),
                        help="sweep direction(s), default both")
    parser.add_argument("--out", help="output directory (default: cwd)")
    parser.add_argument("--seed", type=int, help="generator seed")
    parser.add_argument("--config", help="JSON config file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mobnet",
        description="Mobility-network connectivity, efficiency and "
                    "percolation-resilience pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="daily connectivity and efficiency CSVs")
    _add_common(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("percolate",
                       help="percolation traces, persistence, overlay, GeoJSON")
    _add_common(p)
    p.set_defaults(func=cmd_percolate)

    p = sub.add_parser("overlay", help="weekly empirical overlay CSV only")
    _add_common(p)
    p.set_defaults(func=cmd_overlay)

    p = sub.add_parser("synth", help="generate a synthetic archetype dataset")
    _add_common(p)
    p.add_argument("--archetype", choices=synth.ARCHETYPES)
    p.add_argument("--nodes", type=int, help="total node count")
    p.add_argument("--size", type=int,
                   help="hub count / cluster count / core size")
    p.add_argument("--weight-scale", dest="weight_scale", type=float,
                   default=1.0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("voronoi", help="Voronoi cells as GeoJSON")
    _add_common(p)
    p.add_argument("--persistence", help="persistence CSV to join on region_id")
    p.set_defaults(func=cmd_voronoi)

    p = sub.add_parser("ingest-check", help="validate input files and summarize")
    _add_common(p)
    p.set_defaults(func=cmd_ingest_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AssertionError as exc:
        print(f"mobnet: internal invariant failure: {exc}", file=sys.stderr)
        return 2
    except (MobnetError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"mobnet: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
