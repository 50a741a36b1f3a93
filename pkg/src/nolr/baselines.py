"""Reference predictors: previous-hour persistence and a fixed-window model."""

from __future__ import annotations

import numpy as np

from . import logreg
from .datasets import Dataset
from .logreg import TrainConfig


def persistence_predict(y: np.ndarray, test_range: tuple[int, int]) -> np.ndarray:
    """Predict each hour in [lo, hi) as the observed value one hour before.

    Conditions on the true series, not on its own predictions, so ``lo``
    must be at least 1.
    """
    y = np.asarray(y)
    lo, hi = test_range
    if lo < 1:
        raise ValueError("test range must start at hour 1 or later")
    if not lo < hi <= y.shape[0]:
        raise ValueError(f"test range [{lo}, {hi}) outside series of length {y.shape[0]}")
    return y[lo - 1 : hi - 1].copy()


def traditional_logreg(
    train: Dataset,
    test: Dataset,
    config: TrainConfig = TrainConfig(),
) -> np.ndarray:
    """Train once on a fixed window, then classify every test row."""
    if len(train) == 0:
        raise ValueError("training dataset is empty")
    if train.X.shape[1] != test.X.shape[1]:
        raise ValueError(
            f"column mismatch: train has {train.X.shape[1]} neighbors, "
            f"test has {test.X.shape[1]}"
        )
    weights = logreg.train(train.X, train.y, config)
    return logreg.classify_rows(test.X, weights)
