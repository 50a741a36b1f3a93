"""Per-test-point training-window selection by time of day.

The day splits into segments at configured hour-of-day boundaries
(defaults: before 08:00, 08:00 to 17:00, after 17:00). A test point at
absolute hour ``x`` with hour-of-day ``h`` in segment ``i`` trains on
``lengths[i]`` consecutive hourly rows starting at

    start = x - 23 - (h - offsets[i])

which pins the window to the same wall-clock span on the previous day
regardless of the test date. With the default offsets each segment's
window ends strictly before the test hour.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_BOUNDARIES = (8, 17)
DEFAULT_OFFSETS = (0, 8, 17)
DEFAULT_LENGTHS = (10, 12, 1)


class WindowSelectionError(ValueError):
    """The requested window cannot be used: it starts before the timeline
    begins, or it would reach the test hour itself."""


@dataclass(frozen=True)
class WindowPolicy:
    """Segment boundaries with per-segment window offsets and lengths."""

    boundaries: tuple[int, ...] = DEFAULT_BOUNDARIES
    offsets: tuple[int, ...] = DEFAULT_OFFSETS
    lengths: tuple[int, ...] = DEFAULT_LENGTHS

    def __post_init__(self):
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        object.__setattr__(self, "offsets", tuple(self.offsets))
        object.__setattr__(self, "lengths", tuple(self.lengths))
        if not all(0 <= b < 24 for b in self.boundaries):
            raise ValueError("boundaries must lie in [0, 24)")
        if any(a >= b for a, b in zip(self.boundaries, self.boundaries[1:])):
            raise ValueError("boundaries must be strictly increasing")
        segments = len(self.boundaries) + 1
        if len(self.offsets) != segments or len(self.lengths) != segments:
            raise ValueError(f"need one offset and one length per segment ({segments})")
        if any(n < 1 for n in self.lengths):
            raise ValueError("window lengths must be >= 1")

    @property
    def n_segments(self) -> int:
        return len(self.boundaries) + 1


DEFAULT_POLICY = WindowPolicy()


@dataclass(frozen=True)
class TrainingWindow:
    """A slice of past hourly rows: [start_hour_index, start + length)."""

    start_hour_index: int
    length: int

    def __post_init__(self):
        if self.start_hour_index < 0:
            raise ValueError("start_hour_index must be >= 0")
        if self.length < 1:
            raise ValueError("length must be >= 1")

    @property
    def end_hour_index(self) -> int:
        return self.start_hour_index + self.length

    def as_range(self) -> tuple[int, int]:
        return (self.start_hour_index, self.end_hour_index)


def segment_of(hour_of_day: int, policy: WindowPolicy = DEFAULT_POLICY) -> int:
    """1-based index of the segment containing an hour of day.

    Boundaries are exclusive on the left: with defaults, h=8 falls in
    segment 2 and h=17 in segment 3.
    """
    if not 0 <= hour_of_day < 24:
        raise ValueError("hour_of_day must lie in [0, 24)")
    for i, boundary in enumerate(policy.boundaries):
        if hour_of_day < boundary:
            return i + 1
    return policy.n_segments


def select_window(
    test_hour_index: int,
    hour_of_day: int,
    policy: WindowPolicy = DEFAULT_POLICY,
) -> TrainingWindow:
    """Training window for a test point at absolute hour ``test_hour_index``.

    Raises:
        WindowSelectionError: when the start underflows the timeline, or
            when the window would extend to the test hour or beyond.
            Callers decide whether to skip or clamp such points.
    """
    segment = segment_of(hour_of_day, policy)
    start = test_hour_index - 23 - (hour_of_day - policy.offsets[segment - 1])
    length = policy.lengths[segment - 1]
    if start < 0:
        raise WindowSelectionError(
            f"window start {start} underflows the timeline for test hour "
            f"{test_hour_index} (hour of day {hour_of_day})"
        )
    if start + length > test_hour_index:
        raise WindowSelectionError(
            f"window [{start}, {start + length}) reaches test hour {test_hour_index}"
        )
    return TrainingWindow(start_hour_index=start, length=length)
