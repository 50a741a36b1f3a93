"""Neighbor-based occupancy prediction for EV charging stations.

Predicts one station's hourly binary occupancy from the concurrent
occupancy of its neighbors, using a single-neuron logistic model whose
training window is chosen by the test point's time of day, and benchmarks
it against previous-hour persistence and a fixed-window model.
"""

from .baselines import persistence_predict, traditional_logreg
from .datasets import Dataset, build_dataset, concat_datasets, neighbor_stations
from .evaluate import (
    ALL_MODELS,
    EvalReport,
    NolrResult,
    TuneResult,
    nolr_predict,
    score,
    tune_lengths,
    week_range,
    weekly_report,
    weeks_to_ranges,
    write_plot_csv,
    write_report_json,
)
from .ingest import (
    EventLogError,
    EventRecord,
    GridStats,
    OccupancyGrid,
    discretize,
    grid_stats,
    parse_events,
    read_grid_csv,
    write_events_csv,
    write_grid_csv,
)
from .logreg import (
    TrainConfig,
    WeightVector,
    backward,
    classify,
    classify_rows,
    dump_weights,
    forward,
    net_input,
    sigmoid,
    sigmoid_derivative,
    train,
)
from .synth import CalibrationError, SynthConfig, default_origin, generate, synth_grid
from .windows import (
    DEFAULT_POLICY,
    TrainingWindow,
    WindowPolicy,
    WindowSelectionError,
    segment_of,
    select_window,
)

__version__ = "0.1.0"
