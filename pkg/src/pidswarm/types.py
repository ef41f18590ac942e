"""Small value types shared by every module.

Per-task quantities (errors, stimuli, thresholds) are plain numpy arrays whose
last axis is ordered N, E, S, W, matching :class:`Task`.
"""

from __future__ import annotations

from enum import IntEnum
from typing import NamedTuple

import numpy as np


class Task(IntEnum):
    NORTH = 0
    EAST = 1
    SOUTH = 2
    WEST = 3

    @property
    def label(self) -> str:
        return self.name[0]


class Action(IntEnum):
    # Push actions share the index of the task they serve.
    PUSH_NORTH = 0
    PUSH_EAST = 1
    PUSH_SOUTH = 2
    PUSH_WEST = 3
    IDLE = 4


N_TASKS = 4
TASK_LABELS = tuple(t.label for t in Task)


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":  # type: ignore[override]
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def norm(self) -> float:
        return float(np.hypot(self.x, self.y))


ORIGIN = Vec2(0.0, 0.0)


def task_vector(n: float = 0.0, e: float = 0.0, s: float = 0.0, w: float = 0.0) -> np.ndarray:
    """Build a per-task float array in canonical N, E, S, W order."""
    return np.array([n, e, s, w], dtype=float)
