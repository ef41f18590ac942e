"""Performance and specialization metrics over recorded runs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from pidswarm.types import N_TASKS, Task

LAST_WINDOW = 100


@dataclass
class RunRecord:
    """Per-timestep log of one run. Row ``k`` is the state at the end of step ``k + 1``."""

    time: np.ndarray
    target: np.ndarray
    tracker: np.ndarray
    distance: np.ndarray
    specialist_counts: np.ndarray
    action_counts: np.ndarray
    specialty: np.ndarray | None = None
    initial_agents: object = None
    final_agents: object = None
    seed: int = 0
    config: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.time)

    @property
    def n_agents(self) -> int:
        return int(self.specialist_counts[0].sum()) if len(self) else 0


@dataclass(frozen=True)
class RunSummary:
    mean_distance: float
    variance_full: np.ndarray
    variance_last: np.ndarray
    seed: int = 0


@dataclass(frozen=True)
class Aggregate:
    mean: float
    std: float
    n: int

    @property
    def degenerate(self) -> bool:
        """True when a single sample makes the standard deviation meaningless."""
        return self.n < 2


def specialties(thresholds: np.ndarray) -> np.ndarray:
    """Index of each row's lowest threshold; ties go to the earliest of N, E, S, W."""
    return np.argmin(np.atleast_2d(thresholds), axis=1).astype(np.int8)


def specialty(thresholds) -> Task:
    return Task(int(specialties(thresholds)[0]))


def specialist_counts(thresholds: np.ndarray) -> np.ndarray:
    thresholds = np.asarray(thresholds)
    if thresholds.size == 0:
        return np.zeros(N_TASKS, dtype=np.int64)
    return np.bincount(specialties(thresholds), minlength=N_TASKS)


def count_variance(series: np.ndarray, window: int | None = None) -> np.ndarray:
    """Population variance of each task's count series.

    ``window=None`` uses the whole series, otherwise the last ``window`` rows.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim == 1:
        series = series[:, None]
    if window is not None:
        if window < 1 or window > len(series):
            raise ValueError(f"window {window} does not fit a series of length {len(series)}")
        series = series[-window:]
    if len(series) == 0:
        raise ValueError("empty series")
    return series.var(axis=0)


def mean_distance(record: RunRecord) -> float:
    if len(record.distance) == 0:
        raise ValueError("empty run record")
    return float(np.mean(record.distance))


def summarize(record: RunRecord, window: int = LAST_WINDOW) -> RunSummary:
    window = min(window, len(record))
    return RunSummary(
        mean_distance=mean_distance(record),
        variance_full=count_variance(record.specialist_counts),
        variance_last=count_variance(record.specialist_counts, window),
        seed=record.seed,
    )


def aggregate_runs(summaries: Sequence[RunSummary | float]) -> Aggregate:
    """Mean and sample standard deviation of per-run mean distances.

    A single run reports ``std = 0`` with ``degenerate`` set.
    """
    if len(summaries) == 0:
        raise ValueError("no runs to aggregate")
    values = np.array(
        [s.mean_distance if isinstance(s, RunSummary) else float(s) for s in summaries]
    )
    std = float(values.std(ddof=1)) if len(values) > 1 else 0.0
    return Aggregate(mean=float(values.mean()), std=std, n=len(values))


def standard_error_of_difference(a: Aggregate, b: Aggregate) -> float:
    return math.sqrt(a.std**2 / a.n + b.std**2 / b.n)
