"""Threshold initialization and per-step threshold updates.

Five methods are supported:

* ``TD0``  fixed thresholds
* ``TD1``  learning/forgetting over a shared [0, 1] range
* ``TD2``  learning/forgetting over heterogeneous split ranges
* ``TD3``  learning/forgetting over random sorted ranges
* ``PID``  error-driven update from proportional, integral and derivative factors

Swarm state is held column-wise in :class:`AgentState`: every array has a
leading agent axis and a trailing task axis (N, E, S, W). A single agent is
just an ``AgentState`` with one row, so the same functions serve both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from pidswarm.types import N_TASKS, Action


@dataclass(frozen=True)
class PidGains:
    kp: float = 0.0
    ki: float = 0.0
    kd: float = 0.0

    def __post_init__(self) -> None:
        for name in ("kp", "ki", "kd"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class WindupGuard:
    """Anti-windup for the integral factor.

    The accumulator for a task only integrates while that task's error is
    positive and is saturated at ``+-i_max``. When the error is zero the stored
    value is reset to 0 (``reset=True``) or held (``reset=False``).
    """

    i_max: float = 10.0
    gate_on_positive_error: bool = True
    reset: bool = True

    def __post_init__(self) -> None:
        if not self.i_max > 0:
            raise ValueError(f"i_max must be > 0, got {self.i_max}")


@dataclass(frozen=True)
class TD0:
    kind = "td0"


@dataclass(frozen=True)
class _LearningForgetting:
    epsilon: float = 0.1
    psi: float = 0.1

    def __post_init__(self) -> None:
        if not (self.epsilon > 0 and self.psi > 0):
            raise ValueError("epsilon and psi must be > 0")


@dataclass(frozen=True)
class TD1(_LearningForgetting):
    kind = "td1"


@dataclass(frozen=True)
class TD2(_LearningForgetting):
    kind = "td2"


@dataclass(frozen=True)
class TD3(_LearningForgetting):
    kind = "td3"


@dataclass(frozen=True)
class PID:
    gains: PidGains = field(default_factory=PidGains)
    guard: WindupGuard = field(default_factory=WindupGuard)
    clamp: bool = True
    kind = "pid"


StrategyConfig = Union[TD0, TD1, TD2, TD3, PID]
STRATEGY_KINDS = ("td0", "td1", "td2", "td3", "pid")


@dataclass
class AgentState:
    thresholds: np.ndarray
    range_min: np.ndarray
    range_max: np.ndarray
    integral: np.ndarray
    prev_error: np.ndarray

    @classmethod
    def from_thresholds(cls, thresholds, range_min=0.0, range_max=1.0) -> "AgentState":
        th = np.atleast_2d(np.asarray(thresholds, dtype=float)).copy()
        return cls(
            thresholds=th,
            range_min=np.broadcast_to(np.asarray(range_min, dtype=float), th.shape).copy(),
            range_max=np.broadcast_to(np.asarray(range_max, dtype=float), th.shape).copy(),
            integral=np.zeros_like(th),
            prev_error=np.zeros_like(th),
        )

    @property
    def n_agents(self) -> int:
        return self.thresholds.shape[0]

    def copy(self) -> "AgentState":
        return AgentState(
            self.thresholds.copy(),
            self.range_min.copy(),
            self.range_max.copy(),
            self.integral.copy(),
            self.prev_error.copy(),
        )


def init_thresholds(config: StrategyConfig, n_agents: int, rng: np.random.Generator) -> AgentState:
    if n_agents < 0:
        raise ValueError("n_agents must be >= 0")
    shape = (n_agents, N_TASKS)
    if isinstance(config, TD2):
        lo = rng.uniform(0.0, 0.5, shape)
        hi = rng.uniform(0.5, 1.0, shape)
    elif isinstance(config, TD3):
        a = rng.uniform(0.0, 1.0, shape)
        b = rng.uniform(0.0, 1.0, shape)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
    else:
        lo, hi = np.zeros(shape), np.ones(shape)
    thresholds = rng.uniform(lo, hi)
    return AgentState(
        thresholds=thresholds,
        range_min=lo,
        range_max=hi,
        integral=np.zeros(shape),
        prev_error=np.zeros(shape),
    )


def update_learning_forgetting(
    agents: AgentState, performed: np.ndarray, epsilon: float, psi: float
) -> AgentState:
    """Lower the performed task's threshold by epsilon, raise every other by psi.

    An idle agent raises all four thresholds. Results are clamped into each
    agent's own range.
    """
    performed = np.atleast_1d(np.asarray(performed))
    delta = np.full(agents.thresholds.shape, psi)
    pushing = performed != Action.IDLE
    rows = np.flatnonzero(pushing)
    delta[rows, performed[pushing]] = -epsilon
    out = agents.copy()
    out.thresholds = np.clip(agents.thresholds + delta, agents.range_min, agents.range_max)
    return out


def pid_factors(err: np.ndarray, prev_err: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Proportional and derivative factors for per-task errors (last axis N, E, S, W)."""
    err = np.asarray(err, dtype=float)
    prev_err = np.asarray(prev_err, dtype=float)
    # Opposite-direction task of N, E, S, W is S, W, N, E.
    f_p = err - err[..., [2, 3, 0, 1]]
    f_d = err - prev_err
    return f_p, f_d


def integral_update(
    integral: np.ndarray, f_p: np.ndarray, err: np.ndarray, guard: WindupGuard
) -> np.ndarray:
    integral = np.asarray(integral, dtype=float)
    summed = np.clip(integral + f_p, -guard.i_max, guard.i_max)
    if not guard.gate_on_positive_error:
        return summed
    active = np.asarray(err) > 0
    idle_value = 0.0 if guard.reset else integral
    return np.where(active, summed, idle_value)


def pid_delta(agents: AgentState, err: np.ndarray, gains: PidGains, guard: WindupGuard):
    """Return ``(delta, new_integral)`` where delta is the unclamped threshold change."""
    f_p, f_d = pid_factors(err, agents.prev_error)
    integral = integral_update(agents.integral, f_p, np.broadcast_to(err, f_p.shape), guard)
    delta = -gains.kp * f_p - gains.ki * integral - gains.kd * f_d
    return delta, integral


def update_pid(
    agents: AgentState, err: np.ndarray, gains: PidGains, guard: WindupGuard, clamp: bool = True
) -> AgentState:
    """Apply the PID threshold rule with a shared error to every agent, clamping to [0, 1]."""
    err = np.asarray(err, dtype=float)
    delta, integral = pid_delta(agents, err, gains, guard)
    out = agents.copy()
    out.thresholds = agents.thresholds + delta
    if clamp:
        out.thresholds = np.clip(out.thresholds, 0.0, 1.0)
    out.integral = integral
    out.prev_error = np.broadcast_to(err, agents.prev_error.shape).copy()
    return out


def apply_strategy(
    agents: AgentState,
    performed: np.ndarray | None,
    err: np.ndarray,
    config: StrategyConfig,
) -> AgentState:
    """Dispatch one threshold update.

    ``performed`` holds each agent's most recent action (``None`` before the
    first decision, in which case learning/forgetting has nothing to learn
    from). ``err`` is the stimulus-normalized directional error.
    """
    if isinstance(config, TD0):
        return agents
    if isinstance(config, (TD1, TD2, TD3)):
        if performed is None:
            return agents
        if len(performed) != agents.n_agents:
            raise ValueError("performed actions and agents differ in length")
        return update_learning_forgetting(agents, performed, config.epsilon, config.psi)
    if isinstance(config, PID):
        return update_pid(agents, err, config.gains, config.guard, config.clamp)
    raise TypeError(f"unsupported strategy config {config!r}")
