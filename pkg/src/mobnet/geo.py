"""Voronoi tessellation of node sites and GeoJSON export.

Cells are computed in an equirectangular projection of lat/lon
(longitude scaled by cos of the bounding box's mid-latitude) and clipped
exactly to the bounding box by mirroring every site across the four box
sides before triangulating: inside the box each mirror image is farther
from any interior point than its original, so the original sites' cells
tile the box and are bounded by the box edges. Vertices are mapped back
to (longitude, latitude).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from scipy.spatial import Voronoi

from .errors import ValidationError
from .ingest import NodeRegistry


@dataclass(frozen=True)
class BoundingBox:
    """Geographic clipping rectangle, degrees."""

    min_lon: float
    min_lat: float
    max_lon: float
    max_lat: float

    def __post_init__(self):
        if self.min_lon >= self.max_lon or self.min_lat >= self.max_lat:
            raise ValueError("bounding box must have positive extent")

    def contains(self, lon: float, lat: float) -> bool:
        return (self.min_lon < lon < self.max_lon
                and self.min_lat < lat < self.max_lat)


@dataclass(frozen=True)
class VoronoiCell:
    """One site's clipped cell; the polygon ring is closed (first point
    repeated last) with vertices in counterclockwise order."""

    region_id: str
    polygon: tuple


def default_bounds(registry: NodeRegistry, pad_fraction: float = 0.05) -> BoundingBox:
    """Registry coordinate extent padded on every side."""
    if len(registry) == 0:
        raise ValueError("cannot derive bounds from an empty registry")
    lons = [site.longitude for site in registry]
    lats = [site.latitude for site in registry]
    span_lon = max(max(lons) - min(lons), 1e-6)
    span_lat = max(max(lats) - min(lats), 1e-6)
    return BoundingBox(
        min(lons) - pad_fraction * span_lon,
        min(lats) - pad_fraction * span_lat,
        max(lons) + pad_fraction * span_lon,
        max(lats) + pad_fraction * span_lat,
    )


def voronoi(registry: NodeRegistry, bounds: BoundingBox | None = None) -> list:
    """One clipped :class:`VoronoiCell` per registry site, registry order."""
    if bounds is None:
        bounds = default_bounds(registry)
    if len(registry) == 0:
        raise ValueError("voronoi needs at least one site")

    coords = np.array(
        [(site.longitude, site.latitude) for site in registry], dtype=np.float64
    )
    unique = {}
    for site, (lon, lat) in zip(registry, coords):
        key = (lon, lat)
        if key in unique:
            raise ValidationError(
                f"sites '{unique[key]}' and '{site.region_id}' share coordinates"
            )
        unique[key] = site.region_id
        if not bounds.contains(lon, lat):
            raise ValidationError(
                f"site '{site.region_id}' lies outside the bounding box"
            )

    scale = math.cos(math.radians((bounds.min_lat + bounds.max_lat) / 2.0))
    scale = max(scale, 1e-9)
    points = np.column_stack((coords[:, 0] * scale, coords[:, 1]))
    xmin, xmax = bounds.min_lon * scale, bounds.max_lon * scale
    ymin, ymax = bounds.min_lat, bounds.max_lat

    mirrored = [points]
    for axis, bound in ((0, xmin), (0, xmax), (1, ymin), (1, ymax)):
        m = points.copy()
        m[:, axis] = 2.0 * bound - m[:, axis]
        mirrored.append(m)
    diagram = Voronoi(np.vstack(mirrored))

    cells = []
    tol = 1e-12 * max(xmax - xmin, ymax - ymin)
    for i, site in enumerate(registry):
        region = diagram.regions[diagram.point_region[i]]
        if -1 in region or len(region) < 3:
            raise AssertionError(
                f"unbounded or degenerate cell for site '{site.region_id}'"
            )
        poly = diagram.vertices[region]
        poly = _order_ccw(_dedupe(poly, tol))
        if len(poly) < 3:
            raise AssertionError(f"collapsed cell for site '{site.region_id}'")
        ring = [(float(x / scale), float(y)) for x, y in poly]
        ring.append(ring[0])
        cells.append(VoronoiCell(site.region_id, tuple(ring)))
    return cells


def _dedupe(poly, tol):
    kept = [poly[0]]
    for vertex in poly[1:]:
        if np.abs(vertex - kept[-1]).max() > tol:
            kept.append(vertex)
    if len(kept) > 1 and np.abs(kept[0] - kept[-1]).max() <= tol:
        kept.pop()
    return np.array(kept)


def _order_ccw(poly):
    center = poly.mean(axis=0)
    angles = np.arctan2(poly[:, 1] - center[1], poly[:, 0] - center[0])
    return poly[np.argsort(angles)]


def cell_area(cell: VoronoiCell) -> float:
    """Shoelace area in squared degrees (lon/lat plane)."""
    ring = np.asarray(cell.polygon)
    x, y = ring[:-1, 0], ring[:-1, 1]
    return float(
        0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
    )


def export_persistence_geojson(cells, persistence: dict) -> dict:
    """RFC 7946 FeatureCollection of cells colored by persistence.

    Cells whose region id has no persistence entry get 0.0.
    """
    features = []
    for cell in cells:
        ring = [[lon, lat] for lon, lat in cell.polygon]
        features.append({
            "type": "Feature",
            "geometry": {"type": "Polygon", "coordinates": [ring]},
            "properties": {
                "region_id": cell.region_id,
                "persistence": float(persistence.get(cell.region_id, 0.0)),
            },
        })
    return {"type": "FeatureCollection", "features": features}


def write_geojson(document: dict, path: Union[str, Path]):
    Path(path).write_text(
        json.dumps(document, indent=2) + "\n", encoding="utf-8"
    )
