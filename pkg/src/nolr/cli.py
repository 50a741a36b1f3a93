"""Command-line front end: synth, grid, benchmark, and tune subcommands."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .evaluate import (
    ALL_MODELS,
    HOURS_PER_WEEK,
    tune_lengths,
    week_range,
    weekly_report,
    weeks_to_ranges,
    write_plot_csv,
    write_report_json,
)
from .ingest import (
    discretize,
    format_rfc3339,
    parse_events,
    parse_rfc3339,
    read_grid_csv,
    write_events_csv,
    write_grid_csv,
)
from .logreg import DERIVATIVE_MODES, TrainConfig
from .synth import SynthConfig, default_origin, generate
from .windows import WindowPolicy


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part != "")

def _span(text: str) -> tuple[int, int]:
    """Parse ``A..B`` into an integer pair."""
    first, sep, last = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected a span like 5..10, got {text!r}")
    return (int(first), int(last))


def _candidates(text: str) -> list[int]:
    """Parse length candidates: ``a-b``, ``a-b:step``, or ``n1,n2,...``."""
    if "-" in text:
        span, _, step = text.partition(":")
        first, _, last = span.partition("-")
        return list(range(int(first), int(last) + 1, int(step) if step else 1))
    return [int(part) for part in text.split(",")]


def _add_policy_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--boundaries", type=_int_list, default=None,
        help="segment boundaries as hours of day, e.g. 8,17",
    )
    parser.add_argument(
        "--offsets", type=_int_list, default=None,
        help="per-segment window base offsets, e.g. 0,8,17",
    )
    parser.add_argument(
        "--lengths", type=_int_list, default=None,
        help="per-segment window lengths in hours, e.g. 10,12,1",
    )


def _policy_from_args(args: argparse.Namespace) -> WindowPolicy:
    kwargs = {}
    if args.boundaries is not None:
        kwargs["boundaries"] = args.boundaries
    if args.offsets is not None:
        kwargs["offsets"] = args.offsets
    if args.lengths is not None:
        kwargs["lengths"] = args.lengths
    return WindowPolicy(**kwargs)


def _add_train_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="run seed")
    parser.add_argument("--max-iterations", type=int, default=1000)
    parser.add_argument("--error-tolerance", type=float, default=1e-6)
    parser.add_argument(
        "--derivative-mode", choices=DERIVATIVE_MODES, default="paper",
        help="weight-update derivative factor",
    )
    parser.add_argument(
        "--workers", type=int, default=None,
        help="evaluate test points in this many processes (default: serial)",
    )


def _train_config(args: argparse.Namespace) -> TrainConfig:
    return TrainConfig(
        max_iterations=args.max_iterations,
        error_tolerance=args.error_tolerance,
        rng_seed=args.seed,
        derivative_mode=args.derivative_mode,
    )


def _cmd_synth(args: argparse.Namespace) -> int:
    config = SynthConfig(
        n_stations=args.stations,
        weeks=args.weeks,
        rng_seed=args.seed,
        target_occupancy=args.target_occupancy,
        mean_session_minutes=args.mean_session_minutes,
        workhour_arrival_multiplier=args.workhour_multiplier,
        neighbor_coupling=args.coupling,
        origin=parse_rfc3339(args.origin) if args.origin else None,
    )
    events = generate(config)
    write_events_csv(events, args.out)
    print(f"wrote {len(events)} events to {args.out}")
    return 0


def _cmd_grid(args: argparse.Namespace) -> int:
    events = parse_events(args.events)
    origin = parse_rfc3339(args.origin) if args.origin else default_origin()
    if args.hours is not None:
        m = args.hours
    elif args.weeks is not None:
        m = args.weeks * HOURS_PER_WEEK
    else:
        last = max(event.unplug_time for event in events)
        m = max(1, -int(-(last - origin).total_seconds() // 3600))
    stations = args.stations if args.stations else sorted({e.station_id for e in events})
    grid = discretize(events, origin, m, stations)
    write_grid_csv(grid, args.out)
    print(f"wrote {grid.n_stations}x{grid.m} grid to {args.out}")
    return 0


def _load_grid(args: argparse.Namespace):
    origin = parse_rfc3339(args.origin) if args.origin else default_origin()
    return read_grid_csv(args.grid, origin)


def _cmd_benchmark(args: argparse.Namespace) -> int:
    grid = _load_grid(args)
    first, last = args.test_weeks
    report = weekly_report(
        grid,
        args.target,
        weeks_to_ranges(first, last),
        models=args.models,
        policy=_policy_from_args(args),
        config=_train_config(args),
        logreg_train_range=(
            week_range(args.train_weeks[0])[0],
            week_range(args.train_weeks[1])[1],
        )
        if args.train_weeks
        else None,
        workers=args.workers,
    )
    write_report_json(report, args.out)
    plot_out = args.plot_out or str(Path(args.out).with_suffix(".csv"))
    write_plot_csv(report, plot_out)
    for name, average in report.average_accuracy.items():
        print(f"{name}: average accuracy {average:.4f}")
    print(f"wrote {args.out} and {plot_out}")
    return 0


def _cmd_tune(args: argparse.Namespace) -> int:
    grid = _load_grid(args)
    result = tune_lengths(
        grid,
        args.target,
        args.range,
        segment_candidates=[args.candidates_n1, args.candidates_n2, args.candidates_n3],
        policy=_policy_from_args(args),
        config=_train_config(args),
        workers=args.workers,
    )
    payload = {"lengths": list(result.lengths), "accuracy": result.accuracy}
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        handle.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"best lengths {result.lengths} (accuracy {result.accuracy:.4f}) -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nolr",
        description="Neighbor-based occupancy prediction for EV charging stations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate a synthetic event log")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--stations", type=int, default=57)
    synth.add_argument("--weeks", type=int, default=10)
    synth.add_argument("--target-occupancy", type=float, default=0.1073)
    synth.add_argument("--mean-session-minutes", type=float, default=216.0)
    synth.add_argument("--workhour-multiplier", type=float, default=6.0)
    synth.add_argument("--coupling", type=float, default=0.5)
    synth.add_argument("--origin", default=None, help="timeline start, RFC 3339")
    synth.add_argument("--out", required=True)
    synth.set_defaults(func=_cmd_synth)

    grid = sub.add_parser("grid", help="discretize an event log into a grid CSV")
    grid.add_argument("--events", required=True)
    grid.add_argument("--origin", default=None, help="hour 0 timestamp, RFC 3339")
    grid.add_argument("--hours", type=int, default=None)
    grid.add_argument("--weeks", type=int, default=None)
    grid.add_argument("--stations", type=lambda s: s.split(","), default=None)
    grid.add_argument("--out", required=True)
    grid.set_defaults(func=_cmd_grid)

    benchmark = sub.add_parser("benchmark", help="score models week by week")
    benchmark.add_argument("--grid", required=True)
    benchmark.add_argument("--origin", default=None, help="grid hour 0, RFC 3339")
    benchmark.add_argument("--target", required=True)
    benchmark.add_argument(
        "--test-weeks", type=_span, required=True,
        help="1-based inclusive week span, e.g. 5..10",
    )
    benchmark.add_argument(
        "--train-weeks", type=_span, default=None,
        help="fixed-window training weeks (default: the 4 weeks before testing)",
    )
    benchmark.add_argument(
        "--models", type=lambda s: s.split(","), default=list(ALL_MODELS),
        help=f"comma list from {','.join(ALL_MODELS)}",
    )
    _add_policy_arguments(benchmark)
    _add_train_arguments(benchmark)
    benchmark.add_argument("--out", required=True, help="report JSON path")
    benchmark.add_argument("--plot-out", default=None, help="plot-data CSV path")
    benchmark.set_defaults(func=_cmd_benchmark)

    tune = sub.add_parser("tune", help="search per-segment window lengths")
    tune.add_argument("--grid", required=True)
    tune.add_argument("--origin", default=None, help="grid hour 0, RFC 3339")
    tune.add_argument("--target", required=True)
    tune.add_argument(
        "--range", type=_span, required=True,
        help="validation hours as a half-open span, e.g. 672..840",
    )
    tune.add_argument("--candidates-n1", type=_candidates, default=list(range(1, 25)))
    tune.add_argument("--candidates-n2", type=_candidates, default=list(range(1, 25)))
    tune.add_argument("--candidates-n3", type=_candidates, default=list(range(1, 25)))
    _add_policy_arguments(tune)
    _add_train_arguments(tune)
    tune.add_argument("--out", required=True, help="result JSON path")
    tune.set_defaults(func=_cmd_tune)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
