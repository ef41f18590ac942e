"""Response-threshold swarm task allocation on a 2D collective tracking testbed."""

from pidswarm.core import (
    Action,
    SimParams,
    Task,
    Vec2,
    WorldState,
    aggregate_actions,
    compute_error,
    normalize_stimulus,
    select_action,
    select_actions,
    simulate,
    step_world,
)
from pidswarm.strategies import (
    PID,
    TD0,
    TD1,
    TD2,
    TD3,
    AgentState,
    PidGains,
    WindupGuard,
    apply_strategy,
    init_thresholds,
)
from pidswarm.paths import PathGenerator, make_path

__all__ = [
    "Action",
    "AgentState",
    "PID",
    "PathGenerator",
    "PidGains",
    "SimParams",
    "TD0",
    "TD1",
    "TD2",
    "TD3",
    "Task",
    "Vec2",
    "WindupGuard",
    "WorldState",
    "aggregate_actions",
    "apply_strategy",
    "compute_error",
    "init_thresholds",
    "make_path",
    "normalize_stimulus",
    "select_action",
    "select_actions",
    "simulate",
    "step_world",
]
