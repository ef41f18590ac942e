"""Ziegler-Nichols closed-loop tuning of the PID threshold controller.

A P-only controller is swept over increasing ``kp`` on the straight path. The
first gain at which the signed east-west error shows a sustained oscillation
is the ultimate gain; the mean spacing of its peaks is the ultimate period.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from pidswarm.core import SimParams, simulate
from pidswarm.paths import make_path
from pidswarm.strategies import PID, PidGains, WindupGuard


class NoOscillationFound(RuntimeError):
    pass


@dataclass(frozen=True)
class UltimatePoint:
    ku: float
    pu: float

    def __post_init__(self) -> None:
        if not self.ku > 0:
            raise ValueError(f"ku must be > 0, got {self.ku}")
        if not self.pu > 0:
            raise ValueError(f"pu must be > 0, got {self.pu}")


@dataclass(frozen=True)
class SweepConfig:
    kp_start: float = 0.01
    kp_step: float = 0.01
    kp_max: float = 1.0
    window: int = 100
    min_peaks: int = 4
    max_spread: float = 0.2

    def __post_init__(self) -> None:
        if not self.kp_start > 0:
            raise ValueError("kp_start must be > 0")
        if not self.kp_step > 0:
            raise ValueError("kp_step must be > 0")
        if self.window < 50:
            raise ValueError("window must be >= 50 timesteps")

    def gains(self) -> list[float]:
        n = int(np.floor((self.kp_max - self.kp_start) / self.kp_step + 1e-9)) + 1
        return [self.kp_start + i * self.kp_step for i in range(max(n, 0))]


def zn_gains(u: UltimatePoint) -> PidGains:
    """Classic Ziegler-Nichols PID gains from the ultimate gain and period."""
    if u.pu == 0:
        raise ValueError("pu must be nonzero")
    return PidGains(kp=0.6 * u.ku, ki=1.2 * u.ku / u.pu, kd=0.075 * u.ku * u.pu)


def detect_oscillation(
    signal: np.ndarray, min_peaks: int = 4, max_spread: float = 0.2
) -> float | None:
    """Return the period of a sustained oscillation in ``signal``, or None.

    Peaks are local maxima; a peak's amplitude is its height above the signal
    mean. The oscillation counts as sustained when some run of ``min_peaks``
    consecutive peaks has amplitudes within ``max_spread`` relative spread
    ``(max - min) / mean``. The latest qualifying run is used and the period is
    its mean peak spacing.
    """
    signal = np.asarray(signal, dtype=float)
    peaks, _ = find_peaks(signal)
    if len(peaks) < min_peaks:
        return None
    amps = signal[peaks] - signal.mean()
    for start in range(len(peaks) - min_peaks, -1, -1):
        a = amps[start : start + min_peaks]
        if a.min() <= 0:
            continue
        if (a.max() - a.min()) / a.mean() <= max_spread:
            run = peaks[start : start + min_peaks]
            return float(np.mean(np.diff(run)))
    return None


def east_west_signal(record) -> np.ndarray:
    """Signed east-west error (east positive) of a run record."""
    return record.target[:, 0] - record.tracker[:, 0]


def find_ultimate(
    n_agents: int = 100,
    params: SimParams = SimParams(),
    seed: int = 0,
    sweep: SweepConfig = SweepConfig(),
    guard: WindupGuard = WindupGuard(),
) -> UltimatePoint:
    if sweep.window > params.timesteps:
        raise ValueError("sweep window exceeds the number of timesteps")
    for kp in sweep.gains():
        strategy = PID(PidGains(kp=kp), guard)
        record = simulate(make_path("west", params.step_length), strategy, n_agents, params, seed)
        period = detect_oscillation(
            east_west_signal(record)[-sweep.window :], sweep.min_peaks, sweep.max_spread
        )
        if period is not None:
            return UltimatePoint(ku=kp, pu=period)
    raise NoOscillationFound(
        f"no sustained oscillation for kp in [{sweep.kp_start}, {sweep.kp_max}]"
    )
