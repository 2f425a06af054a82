"""Deterministic synthetic mobility datasets for three national archetypes.

Each archetype mirrors a qualitative national structure:

* ``star`` - one national hub star-connected to satellite hubs by strong
  long-range links, every satellite carrying a halo of weakly attached
  leaf towns (think: capital-centric country);
* ``multi_cluster`` - several dense regional blocks joined by moderate
  bridges (think: polycentric country);
* ``core_periphery`` - a densely interlinked rich-club core holding the
  strongest flows, with a weakly attached periphery.

The generator emits a fixed 28-day span (2020-03-02 .. 2020-03-29, all
UTC) with three 8-hour windows per day. A synthetic "lockdown" starts on
day 14 (2020-03-16): weights are suppressed and every edge draws a
seeded death day (weak classes die within days, backbone classes mostly
outlive the span), so the full analysis pipeline (daily connectivity,
efficiency/Gini trends, weekly overlays) has something to measure.
Weekends dip in weight but never in presence, which keeps pre-lockdown
aggregates exactly class-structured:

* every pre-lockdown aggregation window preserves the archetype's weight
  classes (e.g. all star leaf edges share one aggregate weight);
* in ``core_periphery`` output the minimum core-core record weight
  strictly exceeds the maximum periphery record weight.

Output is a pure function of the params, including the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta, timezone

import numpy as np

from .ingest import FlowRecord, NodeRegistry, NodeSite

ARCHETYPES = ("star", "multi_cluster", "core_periphery")

#: First day of the synthetic span (a Monday).
SYNTH_START_DAY = date(2020, 3, 2)
#: Number of days in the span.
SYNTH_SPAN_DAYS = 28
#: Synthetic lockdown date (start of week 3, a Monday).
SYNTH_LOCKDOWN_DATE = date(2020, 3, 16)

_WINDOW_HOURS = (0, 8, 16)
#: Within-day traffic profile (morning, midday, evening); sums to 3.
_WINDOW_PROFILE = (0.80, 1.25, 0.95)

_BASE_LAT = 46.0
_BASE_LON = 4.0
_RING_RADIUS = 3.0

# Mean lifetime in days (geometric) of each edge class once the
# lockdown starts; backbone classes mostly outlive the 14 remaining days.
_DEATH_MEAN_DAYS = {
    "star_backbone": 40.0,
    "star_leaf": 4.0,
    "cluster_intra": 7.0,
    "cluster_bridge": 60.0,
    "core": 80.0,
    "periphery": 5.0,
}


@dataclass(frozen=True)
class ArchetypeParams:
    """Parameters of a synthetic dataset.

    Exactly one of ``hub_count`` / ``cluster_count`` / ``core_size`` must
    be given, matching the archetype.
    """

    archetype: str
    node_count: int
    hub_count: int | None = None
    cluster_count: int | None = None
    core_size: int | None = None
    weight_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.archetype not in ARCHETYPES:
            raise ValueError(
                f"unknown archetype '{self.archetype}', expected one of {ARCHETYPES}"
            )
        if self.node_count < 1:
            raise ValueError("node_count must be positive")
        if self.weight_scale <= 0:
            raise ValueError("weight_scale must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

        wanted = {
            "star": "hub_count",
            "multi_cluster": "cluster_count",
            "core_periphery": "core_size",
        }[self.archetype]
        given = {
            name: value
            for name in ("hub_count", "cluster_count", "core_size")
            if (value := getattr(self, name)) is not None
        }
        if set(given) != {wanted}:
            raise ValueError(
                f"archetype '{self.archetype}' takes exactly '{wanted}', got "
                f"{sorted(given) or 'none'}"
            )
        value = given[wanted]
        if value < 1:
            raise ValueError(f"{wanted} must be positive")
        minimum = value + 1 if self.archetype == "star" else value
        if self.node_count < minimum:
            raise ValueError(
                f"node_count {self.node_count} below structural minimum "
                f"{minimum} for '{self.archetype}'"
            )

    @property
    def structure_size(self) -> int:
        """The archetype-specific structural parameter."""
        return next(
            v
            for v in (self.hub_count, self.cluster_count, self.core_size)
            if v is not None
        )


def generate_synthetic(params: ArchetypeParams):
    """Build a synthetic ``(NodeRegistry, [FlowRecord])`` pair.

    Deterministic for fixed params; records are ordered by day, window,
    then edge.
    """
    rng = np.random.default_rng(params.seed)
    if params.archetype == "star":
        sites, edges = _star_structure(params, rng)
    elif params.archetype == "multi_cluster":
        sites, edges = _multi_cluster_structure(params, rng)
    else:
        sites, edges = _core_periphery_structure(params, rng)

    registry = NodeRegistry(sites)
    records = _emit_records(registry, edges, rng)
    return registry, records


def _polar_offset(radius, angle):
    return radius * math.sin(angle), radius * math.cos(angle)


def _site(index, name, lat, lon):
    return NodeSite(f"n{index:04d}", name, lat, lon)


def _star_structure(params, rng):
    """Hub + satellites (strong, distinct weights) + leaves (one shared
    weak weight, so the whole leaf class falls in one percolation step)."""
    n, hubs = params.node_count, params.hub_count
    scale = params.weight_scale
    leaf_weight = 0.5 * scale

    sites = [_site(0, "hub", _BASE_LAT, _BASE_LON)]
    sat_angles = [2 * math.pi * k / hubs for k in range(hubs)]
    for k, angle in enumerate(sat_angles):
        dy, dx = _polar_offset(_RING_RADIUS, angle)
        sites.append(_site(1 + k, f"city-{k}", _BASE_LAT + dy, _BASE_LON + dx))

    edges = []
    for k in range(hubs):
        w = scale * (10.0 + rng.lognormal(0.0, 0.35))
        edges.append((0, 1 + k, w, "star_backbone"))

    leaves = n - 1 - hubs
    for i in range(leaves):
        sat = i % hubs
        idx = 1 + hubs + i
        dy, dx = _polar_offset(
            0.25 + 0.45 * rng.random(), 2 * math.pi * rng.random()
        )
        base = sites[1 + sat]
        sites.append(
            _site(idx, f"town-{i}", base.latitude + dy, base.longitude + dx)
        )
        edges.append((1 + sat, idx, leaf_weight, "star_leaf"))
    return sites, edges


def _multi_cluster_structure(params, rng):
    """Dense intra-cluster blocks plus a moderate ring of gateway bridges."""
    n, k = params.node_count, params.cluster_count
    scale = params.weight_scale

    sizes = [n // k + (1 if c < n % k else 0) for c in range(k)]
    sites, members = [], []
    idx = 0
    for c, size in enumerate(sizes):
        angle = 2 * math.pi * c / k
        dy, dx = _polar_offset(_RING_RADIUS if k > 1 else 0.0, angle)
        lat_c, lon_c = _BASE_LAT + dy, _BASE_LON + dx
        ids = []
        for m in range(size):
            if m == 0:
                lat, lon = lat_c, lon_c  # gateway sits at the center
            else:
                jy, jx = _polar_offset(
                    0.15 + 0.45 * rng.random(), 2 * math.pi * rng.random()
                )
                lat, lon = lat_c + jy, lon_c + jx
            sites.append(_site(idx, f"c{c}-m{m}", lat, lon))
            ids.append(idx)
            idx += 1
        members.append(ids)

    edges = []
    for ids in members:
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                w = scale * rng.lognormal(0.0, 0.6)
                edges.append((ids[a], ids[b], w, "cluster_intra"))
    if k > 1:
        gateways = [ids[0] for ids in members]
        bridge_pairs = 1 if k == 2 else k
        for c in range(bridge_pairs):
            w = scale * (4.0 + rng.lognormal(0.0, 0.3))
            edges.append((gateways[c], gateways[(c + 1) % k], w, "cluster_bridge"))
    return sites, edges


def _core_periphery_structure(params, rng):
    """Complete core holding the top weight band; periphery attached to
    several core nodes by strictly weaker edges."""
    n, core = params.node_count, params.core_size
    scale = params.weight_scale

    sites = []
    for i in range(core):
        angle = 2 * math.pi * i / core
        dy, dx = _polar_offset(0.9 if core > 1 else 0.0, angle)
        sites.append(_site(i, f"core-{i}", _BASE_LAT + dy, _BASE_LON + dx))
    for j in range(n - core):
        radius = 2.2 + 2.0 * rng.random()
        dy, dx = _polar_offset(radius, 2 * math.pi * rng.random())
        sites.append(_site(core + j, f"peri-{j}", _BASE_LAT + dy, _BASE_LON + dx))

    edges = []
    for a in range(core):
        for b in range(a + 1, core):
            w = scale * (10.0 + rng.lognormal(0.0, 0.5))
            edges.append((a, b, w, "core"))
    anchors = min(2, core)
    for j in range(n - core):
        targets = rng.choice(core, size=anchors, replace=False)
        for t in sorted(int(t) for t in targets):
            s = rng.lognormal(0.0, 0.75)
            w = scale * s / (1.0 + s)  # always strictly below `scale`
            edges.append((core + j, t, w, "periphery"))
    return sites, edges


def _day_factor(day_index: int, weekday: int, lockdown_day: int) -> float:
    factor = 1.0
    if weekday == 5:
        factor = 0.72
    elif weekday == 6:
        factor = 0.62
    if day_index >= lockdown_day:
        factor *= 0.45 + 0.15 * math.exp(-(day_index - lockdown_day) / 3.0)
    return factor


def _emit_records(registry, edges, rng):
    ids = registry.region_ids
    lockdown_day = (SYNTH_LOCKDOWN_DATE - SYNTH_START_DAY).days

    # Every edge lives untouched until the lockdown, then dies for good
    # on a class-dependent geometric death day (links that shut down
    # stay shut, which is what makes weekly aggregates thin out too).
    lifetimes = rng.geometric(
        1.0 / np.array([_DEATH_MEAN_DAYS[cls] for *_unused, cls in edges])
    )
    death_day = lockdown_day + lifetimes - 1

    records = []
    for d in range(SYNTH_SPAN_DAYS):
        day = SYNTH_START_DAY + timedelta(days=d)
        factor = _day_factor(d, day.weekday(), lockdown_day)
        for h_index, hour in enumerate(_WINDOW_HOURS):
            start = datetime.combine(day, time(hour), tzinfo=timezone.utc)
            window_factor = factor * _WINDOW_PROFILE[h_index]
            for e_index, (a, b, base_w, _cls) in enumerate(edges):
                if d >= death_day[e_index]:
                    continue
                w = base_w * window_factor
                records.append(FlowRecord(ids[a], ids[b], start, w))
                records.append(FlowRecord(ids[b], ids[a], start, w))
    return records
