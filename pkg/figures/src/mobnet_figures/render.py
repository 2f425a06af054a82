"""Batch renderer for the pipeline's CSV/GeoJSON outputs.

Consumes the emitted file contracts only (no imports from the pipeline
package): ``connectivity.csv``, ``efficiency.csv``, ``trace_*.csv``,
``overlay.csv`` and ``persistence.geojson``. Produces three figure
families: daily time series with LOESS trend lines, percolation decay
curves with weekly overlay markers, and a Voronoi persistence
choropleth.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import date
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import PolyCollection

from .loess import LoessParams, loess_smooth

#: Weekly overlay marker per period, one distinct shape each.
PERIOD_MARKERS = {"before": "o", "during": "^", "after": "D"}
#: Sweep curve colors: weak-edges-first blue, strong-edges-first green.
DIRECTION_COLORS = {"increasing": "tab:blue", "decreasing": "tab:green"}

#: Persistence color scale: dark for transient, bright for persistent.
PERSISTENCE_CMAP = "viridis"

FIGSIZE = (9.0, 6.0)

plt.rcParams["svg.hashsalt"] = "mobnet-figures"


def _require(path: Path) -> Path:
    if not path.is_file():
        raise FileNotFoundError(f"required input file missing: {path}")
    return path


def _read_csv(path: Path) -> list:
    with open(_require(path), newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _save(fig, out_dir: Path, stem: str, formats) -> list:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        target = out_dir / f"{stem}.{fmt}"
        metadata = {"Date": None} if fmt == "svg" else None
        fig.savefig(target, format=fmt, metadata=metadata)
        written.append(target)
    plt.close(fig)
    return written


def _trend(ax, x, y, color):
    if len(x) >= 3:
        ax.plot(x, loess_smooth(x, y, LoessParams()), "--", color=color,
                linewidth=1.4)


def _mark_days(ax, days, lockdown_date):
    for day in days:
        if day.weekday() >= 5:
            ax.axvline(day.toordinal(), color="red", linestyle="--",
                       linewidth=0.6, alpha=0.35)
    if lockdown_date is not None:
        ax.axvline(lockdown_date.toordinal(), color="red", linestyle="-",
                   linewidth=1.4)


def _date_axis(ax, days):
    ticks = days[:: max(1, len(days) // 8)]
    ax.set_xticks([d.toordinal() for d in ticks])
    ax.set_xticklabels([d.isoformat() for d in ticks], rotation=30,
                       ha="right", fontsize=7)


def build_timeseries_figure(in_dir: Path, lockdown_date: date | None = None):
    """Connectivity, normalized efficiency and Gini panels over time."""
    connectivity = _read_csv(in_dir / "connectivity.csv")
    efficiency = _read_csv(in_dir / "efficiency.csv")

    fig, axes = plt.subplots(3, 1, figsize=FIGSIZE, sharex=True)
    days = [date.fromisoformat(r["date"]) for r in connectivity]
    x = np.array([d.toordinal() for d in days], dtype=float)

    lwcc = np.array([float(r["lwcc_size"]) for r in connectivity])
    wcc = np.array([float(r["num_wcc"]) for r in connectivity])
    axes[0].plot(x, lwcc, "o", ms=3, color="tab:blue", label="LWCC size")
    _trend(axes[0], x, lwcc, "tab:blue")
    axes[0].plot(x, wcc, "s", ms=3, color="tab:orange", label="No. WCC")
    _trend(axes[0], x, wcc, "tab:orange")
    axes[0].set_ylabel("connectivity")
    axes[0].legend(loc="center left", fontsize=8)

    eff_days = [date.fromisoformat(r["date"]) for r in efficiency]
    ex = np.array([d.toordinal() for d in eff_days], dtype=float)
    norm = np.array([float(r["normalized_efficiency"]) for r in efficiency])
    gini = np.array([float(r["gini_nodal_efficiency"]) for r in efficiency])
    axes[1].plot(ex, norm, "o", ms=3, color="tab:purple")
    _trend(axes[1], ex, norm, "tab:purple")
    axes[1].set_ylabel("global efficiency\n(normalized)")
    axes[2].plot(ex, gini, "o", ms=3, color="tab:brown")
    _trend(axes[2], ex, gini, "tab:brown")
    axes[2].set_ylabel("Gini of nodal\nefficiency")

    for ax in axes:
        _mark_days(ax, days, lockdown_date)
    _date_axis(axes[2], days)
    fig.align_ylabels(axes)
    fig.tight_layout()
    return fig


def render_timeseries(in_dir: Path, out_dir: Path, formats=("png",),
                      lockdown_date: date | None = None):
    fig = build_timeseries_figure(in_dir, lockdown_date)
    return _save(fig, out_dir, "timeseries", formats)


def _load_traces(in_dir: Path) -> dict:
    traces = {}
    for direction in ("increasing", "decreasing"):
        path = in_dir / f"trace_{direction}.csv"
        if path.is_file():
            traces[direction] = _read_csv(path)
    if not traces:
        raise FileNotFoundError(
            f"required input file missing: {in_dir / 'trace_increasing.csv'} "
            f"(or trace_decreasing.csv)"
        )
    return traces


def build_percolation_figure(in_dir: Path):
    """LWCC and normalized efficiency vs residual edges, with weekly
    empirical markers superimposed."""
    traces = _load_traces(in_dir)
    overlay = _read_csv(in_dir / "overlay.csv")

    fig, (ax_lwcc, ax_eff) = plt.subplots(1, 2, figsize=FIGSIZE)
    for direction, rows in traces.items():
        residual = np.array([float(r["residual_edge_fraction"]) for r in rows])
        lwcc = np.array([float(r["lwcc_size"]) for r in rows])
        eff = np.array([float(r["global_efficiency"]) for r in rows])
        color = DIRECTION_COLORS[direction]
        ax_lwcc.plot(residual, lwcc, color=color, linewidth=1.3,
                     label=f"{direction} weight order")
        if eff[0] > 0:
            ax_eff.plot(residual, eff / eff[0], color=color, linewidth=1.3,
                        label=f"{direction} weight order")

    for period, marker in PERIOD_MARKERS.items():
        rows = [r for r in overlay if r["period"] == period]
        if not rows:
            continue
        residual = [float(r["residual_edge_fraction"]) for r in rows]
        ax_lwcc.scatter(residual, [float(r["lwcc_size"]) for r in rows],
                        marker=marker, s=45, facecolors="none",
                        edgecolors="black", label=period)
        ax_eff.scatter(residual, [float(r["normalized_efficiency"]) for r in rows],
                       marker=marker, s=45, facecolors="none",
                       edgecolors="black", label=period)

    ax_lwcc.set_xlabel("residual edge fraction")
    ax_lwcc.set_ylabel("LWCC size")
    ax_eff.set_xlabel("residual edge fraction")
    ax_eff.set_ylabel("normalized global efficiency")
    for ax in (ax_lwcc, ax_eff):
        ax.invert_xaxis()  # dismantling runs right to left
        ax.legend(fontsize=7)
    fig.tight_layout()
    return fig


def render_percolation(in_dir: Path, out_dir: Path, formats=("png",)):
    fig = build_percolation_figure(in_dir)
    return _save(fig, out_dir, "percolation", formats)


def build_persistence_map_figure(in_dir: Path):
    """Choropleth of Voronoi cells colored by node persistence."""
    with open(_require(in_dir / "persistence.geojson"), encoding="utf-8") as fh:
        document = json.load(fh)

    polygons, values = [], []
    for feature in document.get("features", []):
        ring = feature["geometry"]["coordinates"][0]
        polygons.append(np.asarray(ring))
        values.append(float(feature["properties"].get("persistence", 0.0)))

    fig, ax = plt.subplots(figsize=(7.0, 7.0))
    if polygons:
        collection = PolyCollection(
            polygons, array=np.array(values), cmap=PERSISTENCE_CMAP,
            edgecolors="white", linewidths=0.3,
        )
        collection.set_clim(0.0, 1.0)
        ax.add_collection(collection)
        allpts = np.vstack(polygons)
        ax.set_xlim(allpts[:, 0].min(), allpts[:, 0].max())
        ax.set_ylim(allpts[:, 1].min(), allpts[:, 1].max())
        mid_lat = math.radians(float(allpts[:, 1].mean()))
        ax.set_aspect(1.0 / max(math.cos(mid_lat), 1e-9))
        fig.colorbar(collection, ax=ax, label="node persistence",
                     shrink=0.75)
    ax.set_xlabel("longitude")
    ax.set_ylabel("latitude")
    fig.tight_layout()
    return fig


def render_persistence_map(in_dir: Path, out_dir: Path, formats=("png",)):
    fig = build_persistence_map_figure(in_dir)
    return _save(fig, out_dir, "persistence_map", formats)


def render_all(in_dir: Path, out_dir: Path, formats=("png",),
               lockdown_date: date | None = None):
    written = []
    written += render_timeseries(in_dir, out_dir, formats, lockdown_date)
    written += render_percolation(in_dir, out_dir, formats)
    written += render_persistence_map(in_dir, out_dir, formats)
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mobnet-figures",
        description="Render figures from mobnet pipeline output files",
    )
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory holding the pipeline's CSV/GeoJSON files")
    parser.add_argument("--out", dest="out_dir", required=True,
                        help="directory for the rendered figures")
    parser.add_argument("--formats", default="png",
                        help="comma-separated output formats (png, svg)")
    parser.add_argument("--lockdown-date", dest="lockdown_date",
                        help="ISO date to mark with a solid vertical line")
    args = parser.parse_args(argv)

    formats = tuple(f.strip() for f in args.formats.split(",") if f.strip())
    unknown = set(formats) - {"png", "svg"}
    if not formats or unknown:
        print(f"mobnet-figures: unsupported formats: {sorted(unknown)}",
              file=sys.stderr)
        return 1
    lockdown = (date.fromisoformat(args.lockdown_date)
                if args.lockdown_date else None)
    try:
        written = render_all(Path(args.in_dir), Path(args.out_dir), formats,
                             lockdown)
    except (OSError, ValueError, KeyError) as exc:
        print(f"mobnet-figures: error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
