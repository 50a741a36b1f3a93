"""Single-neuron logistic regression with an error-weighted-derivative update.

The forward pass is a plain dot product pushed through a sigmoid, with no
bias term. The backward pass forms per-row adjustments from the error
vector scaled by a sigmoid-derivative factor and adds the transposed-input
projection of those adjustments straight onto the weights, with no
learning rate:

    r = y - yhat
    A = r * factor(yhat)
    w <- w + X.T @ A

Two derivative factors are supported. The default ``"paper"`` mode applies
the sigmoid derivative to the activations themselves, i.e.
``sigmoid(yhat) * (1 - sigmoid(yhat))``. The ``"textbook"`` mode treats the
activations as already-sigmoided values and uses ``yhat * (1 - yhat)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

import numpy as np

DERIVATIVE_MODES = ("paper", "textbook")
_SEED_MASK = 2**64 - 1


@dataclass(frozen=True)
class TrainConfig:
    """Stopping rule, seeding, and update-factor selection for training."""

    max_iterations: int = 1000
    error_tolerance: float = 1e-6
    rng_seed: int = 0
    derivative_mode: str = "paper"

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.error_tolerance < 0:
            raise ValueError("error_tolerance must be >= 0")
        if self.derivative_mode not in DERIVATIVE_MODES:
            raise ValueError(f"derivative_mode must be one of {DERIVATIVE_MODES}")


@dataclass(frozen=True)
class WeightVector:
    """Trained per-input weights plus how training ended."""

    w: np.ndarray
    iterations_run: int
    final_error_norm: float

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("weights must be a 1-D vector")
        if self.final_error_norm < 0:
            raise ValueError("final_error_norm must be >= 0")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)


def net_input(x: np.ndarray, w: np.ndarray) -> float:
    """Dot product of one input row with the weights."""
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if x.shape != w.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: x has shape {x.shape}, w has {w.shape}")
    return float(x @ w)


def sigmoid(t):
    """Logistic function 1 / (1 + exp(-t)), stable for large |t|.

    Accepts scalars or arrays; returns the matching shape.
    """
    t = np.asarray(t, dtype=np.float64)
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    exp_t = np.exp(t[~pos])
    out[~pos] = exp_t / (1.0 + exp_t)
    return float(out) if out.ndim == 0 else out


def sigmoid_derivative(t):
    """Derivative of the logistic function, sigmoid(t) * (1 - sigmoid(t))."""
    s = sigmoid(t)
    return s * (1.0 - s)


def forward(X: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Activations for every row of X: sigmoid of the row's net input."""
    X = np.asarray(X, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if X.ndim != 2 or w.ndim != 1 or X.shape[1] != w.shape[0]:
        raise ValueError(f"shape mismatch: X is {X.shape}, w is {w.shape}")
    return sigmoid(X @ w)


def backward(
    X: np.ndarray,
    y: np.ndarray,
    y_hat: np.ndarray,
    w: np.ndarray,
    derivative_mode: str = "paper",
) -> tuple[np.ndarray, float]:
    """One weight update from the error vector; returns (new w, ||r||2).

    The adjustment for row i is ``r[i]`` times the derivative factor at
    ``y_hat[i]``; the weight delta is ``X.T @ A``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    rows, cols = X.shape if X.ndim == 2 else (-1, -1)
    if y.shape != (rows,) or y_hat.shape != (rows,) or w.shape != (cols,):
        raise ValueError(
            f"shape mismatch: X is {X.shape}, y is {y.shape}, "
            f"y_hat is {y_hat.shape}, w is {w.shape}"
        )
    if derivative_mode not in DERIVATIVE_MODES:
        raise ValueError(f"derivative_mode must be one of {DERIVATIVE_MODES}")

    r = y - y_hat
    if derivative_mode == "paper":
        factor = sigmoid_derivative(y_hat)
    else:
        factor = y_hat * (1.0 - y_hat)
    adjustments = r * factor
    return w + X.T @ adjustments, float(np.linalg.norm(r))


def train(X: np.ndarray, y: np.ndarray, config: TrainConfig = TrainConfig()) -> WeightVector:
    """Run forward/backward passes until the error norm settles.

    Weights start uniform in [0, 1) from ``config.rng_seed``. Passes stop
    once the change in ||r||2 between consecutive passes drops below
    ``config.error_tolerance``, or after ``config.max_iterations``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("training set must be a nonempty 2-D matrix")
    if y.shape != (X.shape[0],):
        raise ValueError(f"y shape {y.shape} does not match X rows {X.shape[0]}")

    rng = np.random.default_rng(config.rng_seed & _SEED_MASK)
    w = rng.random(X.shape[1])
    previous_norm = None
    iterations = 0
    error_norm = 0.0
    for iterations in range(1, config.max_iterations + 1):
        y_hat = forward(X, w)
        w, error_norm = backward(X, y, y_hat, w, config.derivative_mode)
        if previous_norm is not None and abs(error_norm - previous_norm) < config.error_tolerance:
            break
        previous_norm = error_norm
    return WeightVector(w=w, iterations_run=iterations, final_error_norm=error_norm)


def classify(x: np.ndarray, weights: WeightVector) -> int:
    """Binary decision: 1 when the net input is positive, else 0.

    The activation threshold is 0.5, which the sigmoid reaches exactly at
    net input 0; that tie maps to 0 (unoccupied).
    """
    return 1 if net_input(x, weights.w) > 0 else 0


def classify_rows(X: np.ndarray, weights: WeightVector) -> np.ndarray:
    """Row-wise :func:`classify` over a matrix of inputs."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != weights.w.shape[0]:
        raise ValueError(f"shape mismatch: X is {X.shape}, w is {weights.w.shape}")
    return np.where(X @ weights.w > 0, 1, 0).astype(np.uint8)


def dump_weights(
    weights: WeightVector,
    column_station_ids: Sequence[str],
    dest: str | Path | IO[str],
) -> None:
    """Write per-neighbor weights as CSV ``column_station_id,weight``."""
    if len(column_station_ids) != weights.w.shape[0]:
        raise ValueError("one station id per weight column is required")
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            dump_weights(weights, column_station_ids, handle)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["column_station_id", "weight"])
    for sid, value in zip(column_station_ids, weights.w):
        writer.writerow([sid, repr(float(value))])
