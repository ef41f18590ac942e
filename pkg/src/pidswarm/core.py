"""World state and the per-timestep simulation loop."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from pidswarm.analysis import RunRecord, specialist_counts, specialties
from pidswarm.paths import PathGenerator
from pidswarm.strategies import AgentState, StrategyConfig, apply_strategy, init_thresholds
from pidswarm.types import N_TASKS, ORIGIN, Action, Task, Vec2

__all__ = [
    "Action",
    "SimParams",
    "Task",
    "Vec2",
    "WorldState",
    "aggregate_actions",
    "compute_error",
    "normalize_stimulus",
    "run_streams",
    "select_action",
    "select_actions",
    "simulate",
    "step_world",
]


@dataclass(frozen=True)
class SimParams:
    """Physical parameters of one run.

    ``demand_scale`` and ``push_strength`` default to values derived from the
    step length and swarm size (see :meth:`resolved`).
    """

    timesteps: int = 500
    step_length: float = 1.0
    demand_scale: float | None = None
    speed_ratio: float = 2.0
    push_strength: float | None = None
    raw_stimulus: bool = False

    def __post_init__(self) -> None:
        if self.timesteps < 1:
            raise ValueError("timesteps must be >= 1")
        if self.demand_scale is not None and not self.demand_scale > 0:
            raise ValueError(f"demand_scale must be > 0, got {self.demand_scale}")
        if self.push_strength is not None and not (
            self.push_strength >= 0 and math.isfinite(self.push_strength)
        ):
            raise ValueError("push_strength must be finite and >= 0")

    def resolved(self, n_agents: int) -> "SimParams":
        demand_scale = self.demand_scale if self.demand_scale is not None else 10.0 * self.step_length
        push = self.push_strength
        if push is None:
            push = self.speed_ratio * self.step_length / n_agents if n_agents > 0 else 0.0
        return replace(self, demand_scale=demand_scale, push_strength=push)


@dataclass
class WorldState:
    time: int
    target: Vec2
    tracker: Vec2
    agents: AgentState
    last_actions: np.ndarray | None = None


def compute_error(target: Vec2, tracker: Vec2) -> np.ndarray:
    """Directional error magnitudes (N, E, S, W) of the target relative to the tracker."""
    dx = target[0] - tracker[0]
    dy = target[1] - tracker[1]
    return np.array([max(0.0, dy), max(0.0, dx), max(0.0, -dy), max(0.0, -dx)])


def normalize_stimulus(err: np.ndarray, demand_scale: float) -> np.ndarray:
    if not demand_scale > 0:
        raise ValueError(f"demand_scale must be > 0, got {demand_scale}")
    return np.minimum(1.0, np.asarray(err, dtype=float) / demand_scale)


def select_actions(thresholds: np.ndarray, stimulus: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Pick one action per agent (rows of ``thresholds``).

    An agent pushes the single task whose stimulus exceeds its threshold; with
    several such tasks it picks one uniformly, consuming one ``rng.random()``
    draw, agents taken in index order. Agents with no eligible task idle.
    """
    eligible = np.asarray(stimulus) > thresholds
    counts = eligible.sum(axis=1)
    actions = np.full(len(thresholds), int(Action.IDLE), dtype=np.int64)
    single = counts == 1
    actions[single] = eligible[single].argmax(axis=1)
    multi = np.flatnonzero(counts > 1)
    if multi.size:
        u = rng.random(multi.size)
        pick = np.floor(u * counts[multi]).astype(np.int64)
        # position of the (pick+1)-th True in each row
        ranks = np.cumsum(eligible[multi], axis=1)
        actions[multi] = (ranks <= pick[:, None]).sum(axis=1)
    return actions


def select_action(thresholds, stimulus, rng: np.random.Generator) -> Action:
    return Action(int(select_actions(np.atleast_2d(thresholds), stimulus, rng)[0]))


def aggregate_actions(actions, push_strength: float) -> Vec2:
    counts = np.bincount(np.asarray(actions, dtype=np.int64), minlength=len(Action))
    dx = push_strength * float(counts[Action.PUSH_EAST] - counts[Action.PUSH_WEST])
    dy = push_strength * float(counts[Action.PUSH_NORTH] - counts[Action.PUSH_SOUTH])
    return Vec2(dx, dy)


def step_world(
    state: WorldState,
    path: PathGenerator,
    strategy: StrategyConfig,
    params: SimParams,
    rng: np.random.Generator,
    path_rng: np.random.Generator | None = None,
) -> WorldState:
    """Advance one timestep.

    Order: move the target, measure the error, update thresholds, act, move
    the tracker, advance time. ``params`` must be resolved. The path draws
    from ``path_rng`` (defaults to ``rng``).
    """
    target = state.target + path.next_step(state.time, path_rng if path_rng is not None else rng)
    err = compute_error(target, state.tracker)
    stim = err if params.raw_stimulus else normalize_stimulus(err, params.demand_scale)
    agents = apply_strategy(state.agents, state.last_actions, stim, strategy)
    actions = select_actions(agents.thresholds, stim, rng)
    tracker = state.tracker + aggregate_actions(actions, params.push_strength)
    return WorldState(state.time + 1, target, tracker, agents, actions)


def run_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Independent (init, path, decision) generators for one run.

    The path stream is separate so every strategy sees the same target
    trajectory for a given seed.
    """
    children = np.random.SeedSequence(seed).spawn(3)
    return tuple(np.random.Generator(np.random.PCG64(c)) for c in children)  # type: ignore[return-value]


def simulate(
    path: PathGenerator,
    strategy: StrategyConfig,
    n_agents: int,
    params: SimParams = SimParams(),
    seed: int = 0,
    *,
    agents: AgentState | None = None,
    record_specialty: bool = False,
    config_echo: dict | None = None,
) -> RunRecord:
    """Run one simulation from the origin and log every timestep.

    ``agents`` overrides the seeded initial thresholds. ``path`` is mutated.
    """
    init_rng, path_rng, rng = run_streams(seed)
    if agents is None:
        agents = init_thresholds(strategy, n_agents, init_rng)
    n_agents = agents.n_agents
    params = params.resolved(n_agents)
    T = params.timesteps

    target_xy = np.empty((T, 2))
    tracker_xy = np.empty((T, 2))
    spec_counts = np.empty((T, N_TASKS), dtype=np.int64)
    act_counts = np.empty((T, len(Action)), dtype=np.int64)
    spec_matrix = np.empty((T, n_agents), dtype=np.int8) if record_specialty else None

    initial = agents.copy()
    state = WorldState(0, ORIGIN, ORIGIN, agents)
    for k in range(T):
        state = step_world(state, path, strategy, params, rng, path_rng)
        target_xy[k] = state.target
        tracker_xy[k] = state.tracker
        act_counts[k] = np.bincount(state.last_actions, minlength=len(Action))
        if spec_matrix is not None:
            spec_matrix[k] = specialties(state.agents.thresholds)
            spec_counts[k] = np.bincount(spec_matrix[k], minlength=N_TASKS)
        else:
            spec_counts[k] = specialist_counts(state.agents.thresholds)

    return RunRecord(
        time=np.arange(1, T + 1),
        target=target_xy,
        tracker=tracker_xy,
        distance=np.hypot(*(target_xy - tracker_xy).T),
        specialist_counts=spec_counts,
        action_counts=act_counts,
        specialty=spec_matrix,
        initial_agents=initial,
        final_agents=state.agents,
        seed=seed,
        config=dict(config_echo or {}),
    )
