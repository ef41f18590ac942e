"""Target trajectory generators.

Each generator owns a heading and returns one fixed-length displacement per
timestep. Stochastic paths draw only from the generator passed in, so a path
replays identically for a given seed regardless of what the swarm does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pidswarm.types import Vec2

PATH_KINDS = ("west", "random", "sharp", "scurve", "zigzag")

EAST = 0.0
WEST = math.pi


@dataclass
class PathGenerator:
    step_length: float = 1.0
    heading: float = EAST

    def __post_init__(self) -> None:
        if not (self.step_length > 0 and math.isfinite(self.step_length)):
            raise ValueError(f"step_length must be positive and finite, got {self.step_length}")

    kind = "base"

    def next_step(self, t: int, rng: np.random.Generator) -> Vec2:
        raise NotImplementedError

    def _step_at(self, heading: float) -> Vec2:
        return Vec2(self.step_length * math.cos(heading), self.step_length * math.sin(heading))


@dataclass
class StraightWest(PathGenerator):
    heading: float = WEST
    kind = "west"

    def next_step(self, t: int, rng: np.random.Generator) -> Vec2:
        return Vec2(-self.step_length, 0.0)


@dataclass
class RandomPath(PathGenerator):
    """Heading performs a Gaussian random walk (sigma in radians)."""

    sigma: float = 1.0
    kind = "random"

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    def next_step(self, t: int, rng: np.random.Generator) -> Vec2:
        self.heading += rng.normal(0.0, self.sigma) if self.sigma > 0 else 0.0
        return self._step_at(self.heading)


@dataclass
class SharpPath(PathGenerator):
    """Straight segments; each step turns to a uniform random heading with prob. turn_prob."""

    turn_prob: float = 0.02
    kind = "sharp"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not 0.0 <= self.turn_prob <= 1.0:
            raise ValueError("turn_prob must lie in [0, 1]")

    def next_step(self, t: int, rng: np.random.Generator) -> Vec2:
        if rng.random() < self.turn_prob:
            self.heading = rng.uniform(0.0, 2.0 * math.pi)
        return self._step_at(self.heading)


@dataclass
class SCurve(PathGenerator):
    """East drift with a sinusoidally swinging heading."""

    period: int = 100
    amplitude: float = math.radians(60.0)
    kind = "scurve"

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.period < 1:
            raise ValueError("period must be >= 1")

    def next_step(self, t: int, rng: np.random.Generator) -> Vec2:
        self.heading = self.amplitude * math.sin(2.0 * math.pi * t / self.period)
        return self._step_at(self.heading)


@dataclass
class Zigzag(PathGenerator):
    """Alternates between two headings every half_period steps, starting on heading_up."""

    half_period: int = 50
    heading_up: float = math.radians(45.0)
    heading_down: float = math.radians(-45.0)
    kind = "zigzag"

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.half_period < 1:
            raise ValueError("half_period must be >= 1")
        self.heading = self.heading_up

    def next_step(self, t: int, rng: np.random.Generator) -> Vec2:
        self.heading = self.heading_up if (t // self.half_period) % 2 == 0 else self.heading_down
        return self._step_at(self.heading)


_PATHS = {
    "west": StraightWest,
    "random": RandomPath,
    "sharp": SharpPath,
    "scurve": SCurve,
    "zigzag": Zigzag,
}


def make_path(kind: str, step_length: float = 1.0, **params) -> PathGenerator:
    """Construct a fresh generator; ``params`` are the kind-specific fields."""
    try:
        cls = _PATHS[kind]
    except KeyError:
        raise ValueError(f"unknown path kind {kind!r}; expected one of {PATH_KINDS}") from None
    return cls(step_length=step_length, **params)
