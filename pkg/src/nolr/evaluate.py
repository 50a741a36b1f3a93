"""Benchmark harness: window-selected neighbor models vs. baselines.

For every test hour the neighbor model picks a training window by time of
day, trains a fresh single-neuron model on that window, and classifies the
test hour's neighbor vector. Nothing carries over between test points, and
each point derives its own rng seed from the run seed and its hour index,
so results do not depend on evaluation order or parallelism.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from . import logreg
from .baselines import persistence_predict, traditional_logreg
from .datasets import build_dataset
from .ingest import OccupancyGrid, format_rfc3339
from .logreg import TrainConfig
from .windows import DEFAULT_POLICY, WindowPolicy, WindowSelectionError, select_window

MODEL_NOLR = "nolr"
MODEL_PERSISTENCE = "persistence"
MODEL_LOGREG = "logreg"
ALL_MODELS = (MODEL_NOLR, MODEL_PERSISTENCE, MODEL_LOGREG)

HOURS_PER_WEEK = 168
UNDERFLOW_MODES = ("skip", "clamp")
_SEED_MASK = 2**64 - 1


def score(predictions: np.ndarray, truth: np.ndarray) -> float:
    """Fraction of positions where prediction equals truth."""
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if predictions.shape != truth.shape or predictions.ndim != 1:
        raise ValueError(
            f"shape mismatch: predictions {predictions.shape}, truth {truth.shape}"
        )
    if predictions.shape[0] == 0:
        raise ValueError("cannot score empty vectors")
    return float(np.count_nonzero(predictions == truth)) / predictions.shape[0]


def week_range(week: int) -> tuple[int, int]:
    """Hour range [lo, hi) of a 1-based week on the grid timeline."""
    if week < 1:
        raise ValueError("weeks are numbered from 1")
    return ((week - 1) * HOURS_PER_WEEK, week * HOURS_PER_WEEK)


def weeks_to_ranges(first: int, last: int) -> list[tuple[int, int]]:
    """Hour ranges for the 1-based inclusive week span ``first..last``."""
    if last < first:
        raise ValueError("week span is inverted")
    return [week_range(w) for w in range(first, last + 1)]


@dataclass(frozen=True)
class NolrResult:
    """Predictions for the scored test hours, plus how many were skipped."""

    hour_indices: np.ndarray
    predictions: np.ndarray
    skipped: int


def _point_config(config: TrainConfig, hour_index: int) -> TrainConfig:
    """Per-point training config with a seed derived from (run seed, hour)."""
    seed_seq = np.random.SeedSequence([config.rng_seed & _SEED_MASK, hour_index])
    return replace(config, rng_seed=int(seed_seq.generate_state(1, np.uint64)[0]))


def _train_classify(task) -> int:
    X, y, x_row, config = task
    weights = logreg.train(X, y, config)
    return logreg.classify(x_row, weights)


def nolr_predict(
    grid: OccupancyGrid,
    target: str,
    test_range: tuple[int, int],
    policy: WindowPolicy = DEFAULT_POLICY,
    config: TrainConfig = TrainConfig(),
    underflow: str = "skip",
    workers: int | None = None,
) -> NolrResult:
    """Train one fresh model per test hour and classify that hour.

    Test points whose training window cannot be used (it would start
    before the timeline or touch the test hour) are skipped, or clamped
    into the valid range when ``underflow="clamp"``.
    """
    lo, hi = test_range
    if not 0 <= lo < hi <= grid.m:
        raise ValueError(f"test range [{lo}, {hi}) outside grid of {grid.m} hours")
    if underflow not in UNDERFLOW_MODES:
        raise ValueError(f"underflow must be one of {UNDERFLOW_MODES}")
    target_row = grid.station_index(target)
    neighbor_cells = np.delete(grid.cells, target_row, axis=0)
    target_series = grid.cells[target_row]

    tasks = []
    scored_hours = []
    skipped = 0
    for x in range(lo, hi):
        window = None
        try:
            window = select_window(x, grid.hour_of_day(x), policy)
        except WindowSelectionError:
            if underflow == "clamp":
                window = _clamp_window(x, grid.hour_of_day(x), policy)
        if window is None:
            skipped += 1
            continue
        start, end = window.as_range()
        assert end <= x, "training window reaches the test hour"
        tasks.append(
            (
                neighbor_cells[:, start:end].T.astype(np.float64),
                target_series[start:end].astype(np.float64),
                neighbor_cells[:, x].astype(np.float64),
                _point_config(config, x),
            )
        )
        scored_hours.append(x)

    if workers and workers > 1 and tasks:
        chunksize = max(1, len(tasks) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            predictions = list(pool.map(_train_classify, tasks, chunksize=chunksize))
    else:
        predictions = [_train_classify(task) for task in tasks]

    return NolrResult(
        hour_indices=np.asarray(scored_hours, dtype=np.int64),
        predictions=np.asarray(predictions, dtype=np.uint8),
        skipped=skipped,
    )


def _clamp_window(x: int, hour_of_day: int, policy: WindowPolicy):
    """Pull an out-of-range window back inside [0, x); None if impossible."""
    from .windows import TrainingWindow, segment_of

    segment = segment_of(hour_of_day, policy)
    start = x - 23 - (hour_of_day - policy.offsets[segment - 1])
    length = policy.lengths[segment - 1]
    start = max(start, 0)
    end = min(start + length, x)
    if end <= start:
        return None
    return TrainingWindow(start_hour_index=start, length=end - start)


@dataclass(frozen=True)
class EvalReport:
    """Weekly and aggregate accuracy per model for one target station."""

    target_station: str
    week_hour_ranges: tuple[tuple[int, int], ...]
    weekly_accuracy: dict[str, tuple[float, ...]]
    weekly_scored: dict[str, tuple[int, ...]]
    average_accuracy: dict[str, float]
    skipped_points: dict[str, int]
    fingerprint: str

    def to_json_dict(self) -> dict:
        models = {}
        for name in self.weekly_accuracy:
            weeks = [
                None if math.isnan(a) else a for a in self.weekly_accuracy[name]
            ]
            models[name] = {
                "weeks": weeks,
                "average": self.average_accuracy[name],
                "skipped": self.skipped_points[name],
            }
        return {
            "target": self.target_station,
            "models": models,
            "fingerprint": self.fingerprint,
        }


def _config_fingerprint(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _weighted_average(accuracies: Sequence[float], scored: Sequence[int]) -> float:
    total = sum(scored)
    if total == 0:
        return float("nan")
    return sum(a * n for a, n in zip(accuracies, scored) if n > 0) / total


def weekly_report(
    grid: OccupancyGrid,
    target: str,
    test_weeks: Sequence[tuple[int, int]],
    models: Sequence[str] = ALL_MODELS,
    policy: WindowPolicy = DEFAULT_POLICY,
    config: TrainConfig = TrainConfig(),
    logreg_train_range: tuple[int, int] | None = None,
    underflow: str = "skip",
    workers: int | None = None,
) -> EvalReport:
    """Score every requested model over the given week-by-week hour ranges.

    The fixed-window model trains once; its range defaults to the four
    weeks immediately before the first test range. Averages weight each
    week by its scored-point count.
    """
    ranges = [tuple(r) for r in test_weeks]
    if not ranges:
        raise ValueError("at least one test week is required")
    previous_hi = None
    for lo, hi in ranges:
        if not 0 <= lo < hi <= grid.m:
            raise ValueError(f"week range [{lo}, {hi}) outside grid of {grid.m} hours")
        if previous_hi is not None and lo < previous_hi:
            raise ValueError("week ranges must be ordered and disjoint")
        previous_hi = hi
    model_names = list(models)
    for name in model_names:
        if name not in ALL_MODELS:
            raise ValueError(f"unknown model {name!r}; expected one of {ALL_MODELS}")
    if len(set(model_names)) != len(model_names):
        raise ValueError("duplicate model names")

    target_row = grid.station_index(target)
    target_series = grid.cells[target_row]

    if MODEL_LOGREG in model_names and logreg_train_range is None:
        first_lo = ranges[0][0]
        logreg_train_range = (first_lo - 4 * HOURS_PER_WEEK, first_lo)
        if logreg_train_range[0] < 0:
            raise ValueError(
                "no room before the first test week for the default 4-week "
                "fixed training range; pass logreg_train_range explicitly"
            )

    fingerprint = _config_fingerprint(
        {
            "target": target,
            "test_weeks": [list(r) for r in ranges],
            "models": sorted(model_names),
            "policy": {
                "boundaries": list(policy.boundaries),
                "offsets": list(policy.offsets),
                "lengths": list(policy.lengths),
            },
            "train_config": {
                "max_iterations": config.max_iterations,
                "error_tolerance": config.error_tolerance,
                "rng_seed": config.rng_seed,
                "derivative_mode": config.derivative_mode,
            },
            "logreg_train_range": list(logreg_train_range)
            if logreg_train_range is not None
            else None,
            "underflow": underflow,
            "grid": {
                "origin": format_rfc3339(grid.origin),
                "stations": list(grid.stations),
                "hours": grid.m,
            },
        }
    )

    weekly_accuracy: dict[str, tuple[float, ...]] = {}
    weekly_scored: dict[str, tuple[int, ...]] = {}
    average_accuracy: dict[str, float] = {}
    skipped_points: dict[str, int] = {}

    fixed_weights = None
    if MODEL_LOGREG in model_names:
        train_ds = build_dataset(grid, target, logreg_train_range)
        fixed_weights = logreg.train(train_ds.X, train_ds.y, config)

    for name in model_names:
        accuracies = []
        scored = []
        skipped = 0
        for lo, hi in ranges:
            if name == MODEL_NOLR:
                result = nolr_predict(
                    grid, target, (lo, hi), policy, config, underflow, workers
                )
                skipped += result.skipped
                if result.predictions.shape[0] == 0:
                    accuracies.append(float("nan"))
                    scored.append(0)
                    continue
                truth = target_series[result.hour_indices]
                accuracies.append(score(result.predictions, truth))
                scored.append(int(result.predictions.shape[0]))
            elif name == MODEL_PERSISTENCE:
                predictions = persistence_predict(target_series, (lo, hi))
                accuracies.append(score(predictions, target_series[lo:hi]))
                scored.append(hi - lo)
            else:
                test_ds = build_dataset(grid, target, (lo, hi))
                predictions = logreg.classify_rows(test_ds.X, fixed_weights)
                accuracies.append(score(predictions, test_ds.y))
                scored.append(hi - lo)
        weekly_accuracy[name] = tuple(accuracies)
        weekly_scored[name] = tuple(scored)
        average_accuracy[name] = _weighted_average(accuracies, scored)
        skipped_points[name] = skipped

    return EvalReport(
        target_station=target,
        week_hour_ranges=tuple(ranges),
        weekly_accuracy=weekly_accuracy,
        weekly_scored=weekly_scored,
        average_accuracy=average_accuracy,
        skipped_points=skipped_points,
        fingerprint=fingerprint,
    )


@dataclass(frozen=True)
class TuneResult:
    lengths: tuple[int, ...]
    accuracy: float


def tune_lengths(
    grid: OccupancyGrid,
    target: str,
    validation_range: tuple[int, int],
    segment_candidates: Sequence[Sequence[int]] | None = None,
    stride: int = 1,
    policy: WindowPolicy = DEFAULT_POLICY,
    config: TrainConfig = TrainConfig(),
    underflow: str = "skip",
    workers: int | None = None,
) -> TuneResult:
    """Search per-segment window lengths for the best validation accuracy.

    Defaults sweep every length 1..24 per segment; pass explicit candidate
    lists or a stride to shrink the budget. Ties go to the
    lexicographically smallest length tuple.
    """
    if segment_candidates is None:
        if stride < 1:
            raise ValueError("stride must be >= 1")
        segment_candidates = [range(1, 25, stride)] * policy.n_segments
    candidate_lists = [sorted(set(int(n) for n in c)) for c in segment_candidates]
    if len(candidate_lists) != policy.n_segments:
        raise ValueError(f"need one candidate list per segment ({policy.n_segments})")
    if any(not c for c in candidate_lists):
        raise ValueError("candidate set must be non-empty")
    if any(n < 1 for c in candidate_lists for n in c):
        raise ValueError("window lengths must be >= 1")

    target_row = grid.station_index(target)
    target_series = grid.cells[target_row]

    best: TuneResult | None = None
    for lengths in itertools.product(*candidate_lists):
        result = nolr_predict(
            grid,
            target,
            validation_range,
            replace(policy, lengths=lengths),
            config,
            underflow,
            workers,
        )
        if result.predictions.shape[0] == 0:
            accuracy = float("-inf")
        else:
            accuracy = score(result.predictions, target_series[result.hour_indices])
        if best is None or accuracy > best.accuracy:
            best = TuneResult(lengths=lengths, accuracy=accuracy)
    return best


def write_report_json(report: EvalReport, dest: str | Path | IO[str]) -> None:
    """Serialize a report with stable key order and formatting."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            write_report_json(report, handle)
        return
    dest.write(json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n")


def write_plot_csv(report: EvalReport, dest: str | Path | IO[str]) -> None:
    """Plot-data export: one ``week_index,model,accuracy`` row per cell."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            write_plot_csv(report, handle)
        return
    dest.write("week_index,model,accuracy\n")
    for name, accuracies in report.weekly_accuracy.items():
        for week_index, accuracy in enumerate(accuracies, start=1):
            value = "" if math.isnan(accuracy) else repr(accuracy)
            dest.write(f"{week_index},{name},{value}\n")
