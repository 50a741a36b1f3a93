"""Leave-one-station-out supervised datasets from an occupancy grid.

Each row pairs the neighbors' occupancy at one hour with the target
station's occupancy at that same hour. Rows keep their absolute hour
index so training windows can be addressed by wall-clock hour of day.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import OccupancyGrid


@dataclass(frozen=True)
class Dataset:
    """Input matrix X (rows x neighbors), target vector y, and row origins."""

    X: np.ndarray
    y: np.ndarray
    target_station: str
    hour_index_of_row: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.uint8)
        y = np.asarray(self.y, dtype=np.uint8)
        hours = np.asarray(self.hour_index_of_row, dtype=np.int64)
        if X.ndim != 2:
            raise ValueError("X must be a 2-D matrix")
        if y.shape != (X.shape[0],) or hours.shape != (X.shape[0],):
            raise ValueError("X, y and hour_index_of_row row counts must match")
        if not np.isin(X, (0, 1)).all() or not np.isin(y, (0, 1)).all():
            raise ValueError("dataset entries must be binary")
        for name, value in (("X", X), ("y", y), ("hour_index_of_row", hours)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    def __len__(self) -> int:
        return self.X.shape[0]


def neighbor_stations(grid: OccupancyGrid, target_station: str) -> tuple[str, ...]:
    """Grid stations with the target removed, original order preserved."""
    grid.station_index(target_station)
    return tuple(s for s in grid.stations if s != target_station)


def build_dataset(
    grid: OccupancyGrid,
    target_station: str,
    hour_range: tuple[int, int],
) -> Dataset:
    """Slice grid hours ``[lo, hi)`` into a neighbors-vs-target dataset.

    Row ``k`` holds every non-target station's occupancy at hour ``lo + k``
    in grid station order; ``y[k]`` is the target's occupancy at that hour.
    """
    lo, hi = hour_range
    target_row = grid.station_index(target_station)
    if not 0 <= lo < hi <= grid.m:
        raise ValueError(f"hour range [{lo}, {hi}) outside grid of {grid.m} hours")
    neighbor_cells = np.delete(grid.cells, target_row, axis=0)
    return Dataset(
        X=neighbor_cells[:, lo:hi].T,
        y=grid.cells[target_row, lo:hi],
        target_station=target_station,
        hour_index_of_row=np.arange(lo, hi, dtype=np.int64),
    )


def concat_datasets(first: Dataset, second: Dataset) -> Dataset:
    """Stack two datasets for the same target, preserving row order."""
    if first.target_station != second.target_station:
        raise ValueError("datasets target different stations")
    if first.X.shape[1] != second.X.shape[1]:
        raise ValueError("datasets have different neighbor columns")
    return Dataset(
        X=np.vstack([first.X, second.X]),
        y=np.concatenate([first.y, second.y]),
        target_station=first.target_station,
        hour_index_of_row=np.concatenate(
            [first.hour_index_of_row, second.hour_index_of_row]
        ),
    )
