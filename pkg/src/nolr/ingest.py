"""Charging-event ingestion and hourly occupancy discretization.

Event logs are CSV files with header ``station_id,plug_time,unplug_time``
and RFC 3339 timestamps. Discretization turns a list of plug/unplug
intervals into an n-stations x m-hours binary grid: an hour is marked
occupied when a session overlaps any part of it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

HOUR = timedelta(hours=1)
EVENT_CSV_HEADER = ("station_id", "plug_time", "unplug_time")
GRID_INDEX_COLUMN = "hour_index"


class EventLogError(ValueError):
    """Malformed event CSV input. ``line`` is the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_rfc3339(text: str) -> datetime:
    """Parse an RFC 3339 timestamp to a UTC-aware datetime at whole seconds.

    Naive timestamps are taken as UTC. Fractional seconds are truncated,
    timestamps carry second resolution throughout the library.
    """
    cleaned = text.strip()
    if cleaned.endswith(("Z", "z")):
        cleaned = cleaned[:-1] + "+00:00"
    ts = datetime.fromisoformat(cleaned)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def format_rfc3339(ts: datetime) -> str:
    """Render a datetime as ``YYYY-MM-DDTHH:MM:SSZ`` (UTC)."""
    ts = ensure_utc(ts)
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


def ensure_utc(ts: datetime) -> datetime:
    """Normalize a datetime to UTC-aware; naive input is taken as UTC."""
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


@dataclass(frozen=True)
class EventRecord:
    """One charging session: a station id and its plug/unplug interval."""

    station_id: str
    plug_time: datetime
    unplug_time: datetime

    def __post_init__(self):
        if not self.station_id:
            raise ValueError("station_id must be non-empty")
        object.__setattr__(self, "plug_time", ensure_utc(self.plug_time))
        object.__setattr__(self, "unplug_time", ensure_utc(self.unplug_time))
        if not self.plug_time < self.unplug_time:
            raise ValueError(
                "inverted interval: plug_time "
                f"{format_rfc3339(self.plug_time)} is not before unplug_time "
                f"{format_rfc3339(self.unplug_time)}"
            )


@dataclass(frozen=True)
class OccupancyGrid:
    """Binary occupancy of ``n`` stations over ``m`` consecutive hours.

    ``origin`` is the absolute timestamp of hour index 0 and must lie on an
    hour boundary. ``cells[s, h]`` is 1 when station ``stations[s]`` was
    occupied during any part of hour ``h``.
    """

    origin: datetime
    stations: tuple[str, ...]
    cells: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", ensure_utc(self.origin))
        object.__setattr__(self, "stations", tuple(self.stations))
        if self.origin.minute or self.origin.second or self.origin.microsecond:
            raise ValueError("grid origin must lie on an hour boundary")
        if len(set(self.stations)) != len(self.stations):
            raise ValueError("station ids must be unique")
        cells = np.asarray(self.cells, dtype=np.uint8)
        if cells.ndim != 2:
            raise ValueError("cells must be a 2-D matrix")
        if cells.shape[0] != len(self.stations):
            raise ValueError("cells row count must match station count")
        if cells.shape[1] < 1:
            raise ValueError("grid must cover at least one hour")
        if not np.isin(cells, (0, 1)).all():
            raise ValueError("cells must be binary")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def n_stations(self) -> int:
        return len(self.stations)

    @property
    def m(self) -> int:
        """Number of hours covered by the grid."""
        return self.cells.shape[1]

    def station_index(self, station_id: str) -> int:
        try:
            return self.stations.index(station_id)
        except ValueError:
            raise KeyError(f"unknown station id: {station_id!r}") from None

    def hour_of_day(self, hour_index: int) -> int:
        """Wall-clock hour of day (0..23) of an absolute hour index."""
        return (self.origin.hour + hour_index) % 24


@dataclass(frozen=True)
class GridStats:
    occupancy_rate: float
    event_free_fraction: float


def parse_events(source: str | Path | IO[str] | IO[bytes]) -> list[EventRecord]:
    """Read an event CSV into records, preserving file order.

    Raises:
        EventLogError: on a bad header, malformed row, unparseable
            timestamp, or an interval whose unplug does not follow its plug.
            The error message carries the offending 1-based line number.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return parse_events(handle)
    raw = source.read()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")

    reader = csv.reader(io.StringIO(raw))
    rows = list(reader)
    if not rows or tuple(rows[0]) != EVENT_CSV_HEADER:
        raise EventLogError(1, f"expected header {','.join(EVENT_CSV_HEADER)}")

    events: list[EventRecord] = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise EventLogError(line_no, f"expected 3 fields, got {len(row)}")
        station_id, plug_text, unplug_text = (field.strip() for field in row)
        try:
            plug = parse_rfc3339(plug_text)
        except ValueError:
            raise EventLogError(line_no, f"unparseable timestamp {plug_text!r}") from None
        try:
            unplug = parse_rfc3339(unplug_text)
        except ValueError:
            raise EventLogError(line_no, f"unparseable timestamp {unplug_text!r}") from None
        try:
            events.append(EventRecord(station_id, plug, unplug))
        except ValueError as exc:
            raise EventLogError(line_no, str(exc)) from None
    return events


def discretize(
    events: Iterable[EventRecord],
    origin: datetime,
    m: int,
    stations: Sequence[str],
) -> OccupancyGrid:
    """Mark every hour a session overlaps with nonzero duration.

    Hour ``h`` covers the half-open interval ``[origin + h*1h,
    origin + (h+1)*1h)``; a session ending exactly on an hour boundary does
    not occupy the hour that starts there. Session parts outside the grid
    range are ignored. Overlapping sessions on one station OR together.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    origin = ensure_utc(origin)
    if origin.minute or origin.second or origin.microsecond:
        raise ValueError("origin must lie on an hour boundary")
    station_row = {sid: i for i, sid in enumerate(stations)}
    if len(station_row) != len(stations):
        raise ValueError("station ids must be unique")

    cells = np.zeros((len(stations), m), dtype=np.uint8)
    for event in events:
        try:
            row = station_row[event.station_id]
        except KeyError:
            raise ValueError(f"unknown station id: {event.station_id!r}") from None
        plug_s = (event.plug_time - origin).total_seconds()
        unplug_s = (event.unplug_time - origin).total_seconds()
        first = max(math.floor(plug_s / 3600.0), 0)
        last = min(math.ceil(unplug_s / 3600.0) - 1, m - 1)
        if first <= last:
            cells[row, first : last + 1] = 1
    return OccupancyGrid(origin=origin, stations=tuple(stations), cells=cells)


def grid_stats(grid: OccupancyGrid) -> GridStats:
    """Occupied and event-free cell fractions of a grid."""
    total = grid.cells.size
    ones = int(grid.cells.sum())
    return GridStats(
        occupancy_rate=ones / total,
        event_free_fraction=(total - ones) / total,
    )


def write_events_csv(events: Iterable[EventRecord], dest: str | Path | IO[str]) -> None:
    """Write events in the ingestion CSV format (RFC 3339, UTC)."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            write_events_csv(events, handle)
        return
    dest.write(",".join(EVENT_CSV_HEADER) + "\n")
    for event in events:
        dest.write(
            f"{event.station_id},{format_rfc3339(event.plug_time)},"
            f"{format_rfc3339(event.unplug_time)}\n"
        )


def write_grid_csv(grid: OccupancyGrid, dest: str | Path | IO[str]) -> None:
    """Export a grid as CSV: header ``hour_index,<ids...>``, one row per hour."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            write_grid_csv(grid, handle)
        return
    dest.write(",".join((GRID_INDEX_COLUMN, *grid.stations)) + "\n")
    for h in range(grid.m):
        column = grid.cells[:, h]
        dest.write(f"{h}," + ",".join(str(int(v)) for v in column) + "\n")


def read_grid_csv(source: str | Path | IO[str], origin: datetime) -> OccupancyGrid:
    """Load a grid written by :func:`write_grid_csv`.

    The CSV carries no timestamp, so the hour-index origin must be supplied.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return read_grid_csv(handle, origin)
    reader = csv.reader(source)
    rows = list(reader)
    if not rows or not rows[0] or rows[0][0] != GRID_INDEX_COLUMN:
        raise ValueError(f"expected grid header starting with {GRID_INDEX_COLUMN!r}")
    stations = tuple(rows[0][1:])
    if not stations:
        raise ValueError("grid CSV has no station columns")
    cells = np.zeros((len(stations), len(rows) - 1), dtype=np.uint8)
    for h, row in enumerate(rows[1:]):
        if len(row) != len(stations) + 1 or int(row[0]) != h:
            raise ValueError(f"bad grid row at hour index {h}")
        cells[:, h] = [int(v) for v in row[1:]]
    return OccupancyGrid(origin=origin, stations=stations, cells=cells)
