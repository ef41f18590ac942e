"""Experiment configuration: flat ``key = value`` files plus overrides.

Every field of :class:`ExperimentConfig` is a valid key. Lines starting with
``#`` and blank lines are ignored. List-valued keys (``paths``, ``strategies``,
``sizes``) take comma-separated values.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from pidswarm.core import SimParams
from pidswarm.paths import PATH_KINDS, PathGenerator, make_path
from pidswarm.strategies import (
    PID,
    STRATEGY_KINDS,
    TD0,
    TD1,
    TD2,
    TD3,
    PidGains,
    StrategyConfig,
    WindupGuard,
)
from pidswarm.tuning import SweepConfig

# Output of the default `tune` sweep (ku = 0.05, pu = 2), reused on every path.
DEFAULT_GAINS = PidGains(kp=0.03, ki=0.03, kd=0.0075)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    path: str = "west"
    strategy: str = "pid"
    n_agents: int = 100
    timesteps: int = 500
    n_runs: int = 1
    base_seed: int = 0
    output_dir: str = "out"

    step_length: float = 1.0
    demand_scale: float | None = None
    speed_ratio: float = 2.0

    random_sigma: float = 1.0
    sharp_turn_prob: float = 0.02
    scurve_period: int = 100
    scurve_amplitude_deg: float = 60.0
    zigzag_half_period: int = 50
    zigzag_heading_up_deg: float = 45.0
    zigzag_heading_down_deg: float = -45.0

    epsilon: float = 0.1
    psi: float = 0.1
    kp: float = DEFAULT_GAINS.kp
    ki: float = DEFAULT_GAINS.ki
    kd: float = DEFAULT_GAINS.kd
    i_max: float = 10.0
    windup: str = "reset"
    pid_clamp: bool = True

    paths: tuple[str, ...] = PATH_KINDS
    strategies: tuple[str, ...] = STRATEGY_KINDS
    sizes: tuple[int, ...] = (50, 100, 500)

    kp_start: float = 0.01
    kp_step: float = 0.01
    kp_max: float = 1.0
    window: int = 100

    def __post_init__(self) -> None:
        if self.path not in PATH_KINDS:
            raise ConfigError(f"path: unknown kind {self.path!r}")
        if self.strategy not in STRATEGY_KINDS:
            raise ConfigError(f"strategy: unknown kind {self.strategy!r}")
        for p in self.paths:
            if p not in PATH_KINDS:
                raise ConfigError(f"paths: unknown kind {p!r}")
        for s in self.strategies:
            if s not in STRATEGY_KINDS:
                raise ConfigError(f"strategies: unknown kind {s!r}")
        if self.n_agents < 0 or any(n < 0 for n in self.sizes):
            raise ConfigError("n_agents: must be >= 0")
        if self.timesteps < 1:
            raise ConfigError("timesteps: must be >= 1")
        if self.n_runs < 1:
            raise ConfigError("n_runs: must be >= 1")
        if not 0 <= self.base_seed < 2**64:
            raise ConfigError("base_seed: must be an unsigned 64-bit integer")
        if self.demand_scale is not None and not self.demand_scale > 0:
            raise ConfigError("demand_scale: must be > 0")
        if not self.step_length > 0:
            raise ConfigError("step_length: must be > 0")
        if self.windup not in ("reset", "freeze"):
            raise ConfigError("windup: must be 'reset' or 'freeze'")
        if not (self.epsilon > 0 and self.psi > 0):
            raise ConfigError("epsilon/psi: must be > 0")
        if min(self.kp, self.ki, self.kd) < 0:
            raise ConfigError("kp/ki/kd: must be >= 0")
        if not self.i_max > 0:
            raise ConfigError("i_max: must be > 0")
        if not 0 <= self.sharp_turn_prob <= 1:
            raise ConfigError("sharp_turn_prob: must lie in [0, 1]")
        if self.scurve_period < 1 or self.zigzag_half_period < 1:
            raise ConfigError("scurve_period/zigzag_half_period: must be >= 1")

    def sim_params(self) -> SimParams:
        return SimParams(
            timesteps=self.timesteps,
            step_length=self.step_length,
            demand_scale=self.demand_scale,
            speed_ratio=self.speed_ratio,
        )

    def make_path(self, kind: str | None = None) -> PathGenerator:
        kind = kind or self.path
        params: dict = {}
        if kind == "random":
            params = {"sigma": self.random_sigma}
        elif kind == "sharp":
            params = {"turn_prob": self.sharp_turn_prob}
        elif kind == "scurve":
            params = {"period": self.scurve_period, "amplitude": math.radians(self.scurve_amplitude_deg)}
        elif kind == "zigzag":
            params = {
                "half_period": self.zigzag_half_period,
                "heading_up": math.radians(self.zigzag_heading_up_deg),
                "heading_down": math.radians(self.zigzag_heading_down_deg),
            }
        return make_path(kind, self.step_length, **params)

    def make_strategy(self, kind: str | None = None) -> StrategyConfig:
        kind = kind or self.strategy
        if kind == "td0":
            return TD0()
        if kind in ("td1", "td2", "td3"):
            cls = {"td1": TD1, "td2": TD2, "td3": TD3}[kind]
            return cls(epsilon=self.epsilon, psi=self.psi)
        return PID(
            gains=PidGains(self.kp, self.ki, self.kd),
            guard=WindupGuard(i_max=self.i_max, reset=self.windup == "reset"),
            clamp=self.pid_clamp,
        )

    def sweep(self) -> SweepConfig:
        return SweepConfig(kp_start=self.kp_start, kp_step=self.kp_step, kp_max=self.kp_max, window=self.window)

    def echo(self) -> list[tuple[str, str]]:
        return [(k, format_value(v)) for k, v in asdict(self).items()]


_FIELDS = {f.name: f for f in fields(ExperimentConfig)}


def format_value(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (tuple, list)):
        return ",".join(format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_scalar(key: str, kind: str, text: str):
    text = text.strip()
    try:
        if kind == "bool":
            low = text.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(text)
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "optfloat":
            return None if text.lower() in ("none", "") else float(text)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as {kind}") from None
    return text


def _kind_of(key: str) -> str:
    default = getattr(ExperimentConfig, key, None)
    if key == "demand_scale":
        return "optfloat"
    if isinstance(default, bool):
        return "bool"
    if isinstance(default, int):
        return "int"
    if isinstance(default, float):
        return "float"
    return "str"


def parse_value(key: str, text: str):
    """Convert the text form of ``key`` to its typed value."""
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    if key in ("paths", "strategies"):
        return tuple(p.strip() for p in text.split(",") if p.strip())
    if key == "sizes":
        return tuple(_parse_scalar(key, "int", p) for p in text.split(",") if p.strip())
    return _parse_scalar(key, _kind_of(key), text)


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        values[key] = parse_value(key, value)
    return values


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Build a config from an optional file, then apply ``overrides`` (which win)."""
    values: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        values.update(parse_config_text(text))
    for key, value in (overrides or {}).items():
        if key not in _FIELDS:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = parse_value(key, value) if isinstance(value, str) else value
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
