"""Flow-record and site-registry ingestion.

File formats (both UTF-8 CSV with a header row):

* flows:    ``origin_id,destination_id,window_start,weight`` where
  ``window_start`` is RFC 3339 and must land on one of the three daily
  8-hour boundaries (00:00, 08:00, 16:00 UTC) once normalized to UTC,
  and ``weight`` is a non-negative decimal;
* registry: ``region_id,name,lat,lon`` with coordinates in degrees.

Parsing never aggregates: one row becomes one :class:`FlowRecord`.
Zero-weight rows are kept (graph construction drops them later).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

from .errors import ParseError, ValidationError

FLOW_HEADER = ("origin_id", "destination_id", "window_start", "weight")
REGISTRY_HEADER = ("region_id", "name", "lat", "lon")

#: Length of one observation window; three windows tile a UTC day.
WINDOW_HOURS = 8

Source = Union[str, Path, IO[str], IO[bytes]]


@dataclass(frozen=True)
class FlowRecord:
    """One origin->destination movement measurement in one 8-hour window.

    ``weight`` is a dimensionless flow index, not a head count.
    """

    origin_id: str
    destination_id: str
    window_start: datetime
    weight: float

    def __post_init__(self):
        if self.weight < 0:
            raise ValidationError(
                f"flow weight must be non-negative, got {self.weight}"
            )
        ts = self.window_start
        if ts.tzinfo is None or ts.utcoffset() != timedelta(0):
            raise ValidationError("window_start must be timezone-aware UTC")
        if ts.hour % WINDOW_HOURS or ts.minute or ts.second or ts.microsecond:
            raise ValidationError(
                f"window_start {ts.isoformat()} is not aligned to an "
                f"8-hour boundary (00:00 / 08:00 / 16:00 UTC)"
            )


@dataclass(frozen=True)
class NodeSite:
    """A geographic site: region identifier, display name, centroid."""

    region_id: str
    name: str
    latitude: float
    longitude: float

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ValidationError(
                f"latitude {self.latitude} out of range for '{self.region_id}'"
            )
        if not -180.0 <= self.longitude <= 180.0:
            raise ValidationError(
                f"longitude {self.longitude} out of range for '{self.region_id}'"
            )


class NodeRegistry:
    """Ordered collection of :class:`NodeSite` with unique region ids.

    Iteration order is construction (file) order, which keeps all
    downstream node orderings reproducible.
    """

    def __init__(self, sites: Iterable[NodeSite]):
        self.sites = tuple(sites)
        self._by_id = {}
        for site in self.sites:
            if site.region_id in self._by_id:
                raise ValidationError(f"duplicate region_id '{site.region_id}'")
            self._by_id[site.region_id] = site

    def __len__(self):
        return len(self.sites)

    def __iter__(self):
        return iter(self.sites)

    def __contains__(self, region_id: str):
        return region_id in self._by_id

    def __getitem__(self, region_id: str) -> NodeSite:
        return self._by_id[region_id]

    def __eq__(self, other):
        return isinstance(other, NodeRegistry) and self.sites == other.sites

    @property
    def region_ids(self) -> tuple:
        return tuple(site.region_id for site in self.sites)


def _text_lines(source: Source):
    """Yield decoded lines from a path, text stream, or byte stream."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            yield from fh
        return
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    yield from io.StringIO(data, newline="")


def _check_header(row, expected, what):
    got = tuple(cell.strip() for cell in row)
    if got != expected:
        raise ParseError(
            f"{what} header must be '{','.join(expected)}', got '{','.join(got)}'"
        )


def parse_timestamp(text: str) -> datetime:
    """Parse an RFC 3339 timestamp and normalize it to UTC."""
    cleaned = text.strip()
    if cleaned.endswith(("Z", "z")):
        cleaned = cleaned[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(cleaned)
    except ValueError:
        raise ParseError(f"unknown timestamp format '{text}'") from None
    if ts.tzinfo is None:
        # Bare timestamps are taken as UTC; the formats we emit always
        # carry an explicit offset.
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_flow_records(source: Source) -> list:
    """Parse a flow CSV into a list of :class:`FlowRecord`.

    Raises :class:`ParseError` naming line and column for malformed rows
    and :class:`ValidationError` for invariant violations (negative
    weight, misaligned window).
    """
    reader = csv.reader(_text_lines(source))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("flow CSV is empty (missing header)") from None
    _check_header(header, FLOW_HEADER, "flow CSV")

    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(FLOW_HEADER):
            raise ParseError(
                f"line {lineno}: expected {len(FLOW_HEADER)} fields, got {len(row)}"
            )
        origin, dest, ts_text, w_text = (cell.strip() for cell in row)
        if not origin or not dest:
            column = "origin_id" if not origin else "destination_id"
            raise ParseError(f"line {lineno}: empty column '{column}'")
        try:
            window_start = parse_timestamp(ts_text)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: column 'window_start': {exc}") from None
        try:
            weight = float(w_text)
        except ValueError:
            raise ParseError(
                f"line {lineno}: column 'weight': not a number: '{w_text}'"
            ) from None
        if weight != weight:  # NaN
            raise ParseError(f"line {lineno}: column 'weight': NaN is not allowed")
        try:
            records.append(FlowRecord(origin, dest, window_start, weight))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    return records


def parse_node_registry(source: Source) -> NodeRegistry:
    """Parse a registry CSV into a :class:`NodeRegistry` (file order)."""
    reader = csv.reader(_text_lines(source))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("registry CSV is empty (missing header)") from None
    _check_header(header, REGISTRY_HEADER, "registry CSV")

    sites = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(REGISTRY_HEADER):
            raise ParseError(
                f"line {lineno}: expected {len(REGISTRY_HEADER)} fields, got {len(row)}"
            )
        region_id, name, lat_text, lon_text = (cell.strip() for cell in row)
        if not region_id:
            raise ParseError(f"line {lineno}: empty column 'region_id'")
        try:
            lat = float(lat_text)
            lon = float(lon_text)
        except ValueError:
            raise ParseError(
                f"line {lineno}: columns 'lat'/'lon' must be decimal degrees"
            ) from None
        try:
            sites.append(NodeSite(region_id, name, lat, lon))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    try:
        return NodeRegistry(sites)
    except ValidationError as exc:
        raise ValidationError(f"registry: {exc}") from None


def filter_window(records: Sequence[FlowRecord], start: datetime,
                  end: datetime) -> list:
    """Keep records with ``start <= window_start < end`` (order preserved)."""
    if start >= end:
        raise ValueError(f"empty window: start {start} >= end {end}")
    return [r for r in records if start <= r.window_start < end]


def format_timestamp(ts: datetime) -> str:
    """RFC 3339 with trailing Z, the format written by all emitters."""
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def write_flow_csv(records: Iterable[FlowRecord], target: Union[str, Path, IO[str]]):
    """Write records in the canonical flow schema (round-trips exactly)."""
    _write_rows(
        target,
        FLOW_HEADER,
        (
            (r.origin_id, r.destination_id, format_timestamp(r.window_start),
             repr(r.weight))
            for r in records
        ),
    )


def write_registry_csv(registry: NodeRegistry, target: Union[str, Path, IO[str]]):
    """Write a registry in the canonical schema (round-trips exactly)."""
    _write_rows(
        target,
        REGISTRY_HEADER,
        (
            (s.region_id, s.name, repr(s.latitude), repr(s.longitude))
            for s in registry
        ),
    )


def _write_rows(target, header, rows):
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            _write_rows(fh, header, rows)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
