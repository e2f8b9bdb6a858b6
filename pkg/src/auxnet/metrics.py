"""Prequential run metrics and their CSV form.

Accuracy at step t counts the prediction made before training on instance t
(test-then-train). Cumulative series are running means over steps 1..t; the
run summary is the final cumulative value. Floats are written with repr
precision so a file round-trips exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

STEP_COLUMNS = ["t", "num_active_aux", "predicted", "actual",
                "step_loss", "cum_accuracy", "cum_loss"]


@dataclass
class RunMetrics:
    num_active_aux: np.ndarray
    predicted: np.ndarray
    actual: np.ndarray
    step_loss: np.ndarray
    cum_accuracy: np.ndarray
    cum_loss: np.ndarray

    def __len__(self) -> int:
        return len(self.predicted)

    @property
    def avg_accuracy(self) -> float:
        return float(self.cum_accuracy[-1]) if len(self) else float("nan")

    @property
    def avg_loss(self) -> float:
        return float(self.cum_loss[-1]) if len(self) else float("nan")

    @classmethod
    def from_steps(cls, num_active_aux, predicted, actual, step_loss) -> RunMetrics:
        predicted = np.asarray(predicted, dtype=int)
        actual = np.asarray(actual, dtype=int)
        step_loss = np.asarray(step_loss, dtype=float)
        num_active_aux = np.asarray(num_active_aux, dtype=int)
        steps = np.arange(1, len(predicted) + 1)
        correct = (predicted == actual).astype(float)
        # cumsum in both places (here and in reaggregation) so the summary is
        # reproducible from the per-step file bit for bit
        cum_accuracy = np.cumsum(correct) / steps
        cum_loss = np.cumsum(step_loss) / steps
        return cls(num_active_aux, predicted, actual, step_loss, cum_accuracy, cum_loss)


def write_step_csv(metrics: RunMetrics, path) -> None:
    """One row per step, columns STEP_COLUMNS, t starting at 1."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(STEP_COLUMNS)
        for i in range(len(metrics)):
            w.writerow([
                i + 1,
                int(metrics.num_active_aux[i]),
                int(metrics.predicted[i]),
                int(metrics.actual[i]),
                repr(float(metrics.step_loss[i])),
                repr(float(metrics.cum_accuracy[i])),
                repr(float(metrics.cum_loss[i])),
            ])


def read_step_csv(path) -> RunMetrics:
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header != STEP_COLUMNS:
            raise ValueError(f"unexpected step CSV header in {path}: {header}")
        rows = list(r)
    return RunMetrics.from_steps(
        num_active_aux=[int(row[1]) for row in rows],
        predicted=[int(row[2]) for row in rows],
        actual=[int(row[3]) for row in rows],
        step_loss=[float(row[4]) for row in rows],
    )


def reaggregate(path) -> tuple[float, float]:
    """Recompute (avg_accuracy, avg_loss) from a per-step CSV.

    Matches the run summary exactly when the file is intact.
    """
    m = read_step_csv(path)
    return m.avg_accuracy, m.avg_loss
