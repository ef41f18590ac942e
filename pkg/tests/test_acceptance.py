"""Exit criteria for the package, one test per criterion.

Each test records a one-line PASS/FAIL verdict that is printed in the pytest
terminal summary. Run alone with ``pytest tests/test_acceptance.py``.
"""

import os

import numpy as np
import pytest

from pidswarm.analysis import (
    aggregate_runs,
    specialty,
    standard_error_of_difference,
    summarize,
)
from pidswarm.cli import main
from pidswarm.config import ExperimentConfig
from pidswarm.core import SimParams, compute_error, simulate
from pidswarm.paths import PATH_KINDS
from pidswarm.runner import RunSpec, execute, run_batch
from pidswarm.strategies import (
    STRATEGY_KINDS,
    TD0,
    AgentState,
    WindupGuard,
    integral_update,
    pid_factors,
    update_learning_forgetting,
)
from pidswarm.tuning import UltimatePoint, zn_gains
from pidswarm.types import Action, Task, Vec2

VERDICTS = []


def report(criterion, ok, detail):
    VERDICTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")


# Partition invariant (criterion 8) is checked on every run this module executes.
PARTITION_LOG = []


def run_and_check(spec: RunSpec):
    rec = execute(spec)
    ok = bool((rec.specialist_counts.sum(axis=1) == spec.n_agents).all())
    ok &= bool((rec.action_counts.sum(axis=1) == spec.n_agents).all())
    return summarize(rec), ok


def batch(path, strategy, n_agents, seeds, timesteps=500):
    cfg = ExperimentConfig()
    specs = [
        RunSpec(cfg.make_path(path), cfg.make_strategy(strategy), n_agents,
                SimParams(timesteps=timesteps), seed)
        for seed in seeds
    ]
    return specs


def run_cells(cells):
    """Run a list of (key, specs) pairs in one parallel batch; returns {key: [summary]}."""
    flat = [s for _, specs in cells for s in specs]
    results = run_batch(flat, fn=run_and_check)
    PARTITION_LOG.extend(ok for _, ok in results)
    out, i = {}, 0
    for key, specs in cells:
        out[key] = [r for r, _ in results[i : i + len(specs)]]
        i += len(specs)
    return out


SIZES = (50, 100, 500)
N_RUNS_GRID = 30
N_SPEC = 100


@pytest.fixture(scope="module")
def grid():
    cells = [((p, s, n), batch(p, s, n, range(N_RUNS_GRID)))
             for p in PATH_KINDS for s in STRATEGY_KINDS for n in SIZES]
    return run_cells(cells)


@pytest.fixture(scope="module")
def spec_runs():
    cells = []
    for path in ("west", "scurve", "random", "sharp"):
        for s in STRATEGY_KINDS:
            cells.append(((path, s), batch(path, s, N_SPEC, range(20))))
    return run_cells(cells)


def test_c1_pid_beats_baselines_everywhere(grid):
    failures = []
    for p in PATH_KINDS:
        for n in SIZES:
            pid = aggregate_runs(grid[(p, "pid", n)])
            for s in ("td0", "td1", "td2", "td3"):
                other = aggregate_runs(grid[(p, s, n)])
                gap = other.mean - pid.mean
                if not gap > standard_error_of_difference(pid, other):
                    failures.append(f"{p}/{n}/{s}: pid {pid.mean:.3f} vs {other.mean:.3f}")
    report(1, not failures, f"PID mean distance below TD0-TD3 by > 1 SE in "
           f"{75 // 5 * 4 - len(failures)}/60 comparisons" + (f"; failing {failures}" if failures else ""))
    assert not failures


def test_c2_straight_path_stabilizes(spec_runs):
    seeds = range(10)
    bad = []
    for k in seeds:
        td0 = spec_runs[("west", "td0")][k]
        if not (td0.variance_last < 1e-9).all():
            bad.append(f"td0 seed {k}")
        pid = spec_runs[("west", "pid")][k]
        west_full = pid.variance_full[Task.WEST]
        if not (west_full > 0 and (10 * pid.variance_last <= west_full).all()):
            bad.append(f"pid seed {k}: last {pid.variance_last}, full W {west_full:.3f}")
    others = {s: float(np.median([r.variance_last.max() for r in spec_runs[("west", s)][:10]]))
              for s in ("td1", "td2", "td3")}
    report(2, not bad, f"last-100 variances: TD0 < 1e-9 and PID <= 0.1 x full-run W variance "
           f"on {len(seeds) - len(bad)}/10 seeds (TD1-3 median max last-100 var {others})")
    assert not bad


def _median(runs, attr, task):
    return float(np.median([getattr(r, attr)[task] for r in runs]))


def test_c3_sustained_responsiveness(spec_runs):
    lines, ok = [], True
    for path in ("scurve", "random"):
        pid_last = _median(spec_runs[(path, "pid")], "variance_last", Task.NORTH)
        pid_full = _median(spec_runs[(path, "pid")], "variance_full", Task.NORTH)
        td_last = [_median(spec_runs[(path, s)], "variance_last", Task.NORTH) for s in ("td1", "td2", "td3")]
        td_full = [_median(spec_runs[(path, s)], "variance_full", Task.NORTH) for s in ("td1", "td2", "td3")]
        cond = pid_last >= 0.5 * pid_full and pid_last > max(td_last) and pid_full > max(td_full)
        ok &= cond
        lines.append(f"{path}: PID N var last {pid_last:.1f} / full {pid_full:.1f}, "
                     f"TD1-3 last {np.round(td_last, 2).tolist()} full {np.round(td_full, 2).tolist()}")
    report(3, ok, "; ".join(lines))
    assert ok


def test_c4_sharp_path_contraction(spec_runs):
    runs = spec_runs[("sharp", "pid")]
    last = _median(runs, "variance_last", Task.SOUTH)
    full = _median(runs, "variance_full", Task.SOUTH)
    ok = last < 0.5 * full
    report(4, ok, f"sharp PID S var median last-100 {last:.2f} vs 0.5 x full {0.5 * full:.2f}")
    assert ok


def test_c5_zn_exact():
    g = zn_gains(UltimatePoint(1, 10))
    err = max(abs(g.kp - 0.6), abs(g.ki - 0.12), abs(g.kd - 0.75))
    report(5, err <= 1e-12, f"zn_gains(1, 10) = ({g.kp}, {g.ki}, {g.kd}), max error {err:.1e}")
    assert err <= 1e-12


def test_c6_equation_suite():
    rng = np.random.default_rng(6)
    checks = {}

    pts = rng.uniform(-1e3, 1e3, (10_000, 4))
    errs = np.array([compute_error(Vec2(a, b), Vec2(c, d)) for a, b, c, d in pts])
    checks["directional errors exclusive"] = bool(
        (errs >= 0).all() and not (errs[:, 0] * errs[:, 2]).any() and not (errs[:, 1] * errs[:, 3]).any()
    )

    fp, _ = pid_factors(errs, np.zeros_like(errs))
    checks["proportional antisymmetry"] = bool(
        (fp[:, 0] == -fp[:, 2]).all() and (fp[:, 1] == -fp[:, 3]).all()
        and (fp[:, 0] == errs[:, 0] - errs[:, 2]).all() and (fp[:, 1] == errs[:, 1] - errs[:, 3]).all()
    )

    # integral equals direct summation (gate off, no saturation) over 50 steps
    seq = errs[:50] / 100.0
    guard = WindupGuard(i_max=1e15, gate_on_positive_error=False)
    acc = np.zeros(4)
    for e in seq:
        f, _ = pid_factors(e, np.zeros(4))
        acc = integral_update(acc, f, e, guard)
    oracle = np.array([sum(e[i] - e[(i + 2) % 4] for e in seq) for i in range(4)])
    checks["integral = summation"] = bool(np.abs(acc - oracle).max() <= 1e-12)

    prev = np.zeros(4)
    ok = True
    for e in errs[:1000]:
        _, fd = pid_factors(e, prev)
        ok &= bool((fd == e - prev).all())
        prev = e
    checks["derivative = difference"] = ok

    ok = True
    for th in (np.full(4, 0.5), np.array([0.05, 0.95, 0.5, 0.0])):
        for a in Action:
            out = update_learning_forgetting(AgentState.from_thresholds([th]), [a], 0.1, 0.1).thresholds[0]
            expect = th + 0.1 if a is Action.IDLE else np.where(np.arange(4) == a, th - 0.1, th + 0.1)
            ok &= bool(np.abs(out - np.clip(expect, 0, 1)).max() <= 1e-12)
    checks["learning/forgetting deltas"] = ok

    ok = True
    for mask in range(1, 16):
        bits = [(mask >> i) & 1 for i in range(4)]
        th = np.where(np.array(bits) == 1, 0.1, 0.9)
        ok &= specialty(th) == Task(bits.index(1))
    checks["argmin tie patterns"] = ok

    failed = [k for k, v in checks.items() if not v]
    report(6, not failed, f"{len(checks) - len(failed)}/{len(checks)} equation checks exact"
           + (f"; failing {failed}" if failed else ""))
    assert not failed


def _snapshot(d):
    return {p: (d / p).read_bytes() for p in sorted(os.listdir(d))}


def test_c7_determinism(tmp_path):
    commands = {
        "run": ["run", "--path", "random", "--runs", "3", "--steps", "200", "--agents", "50"],
        "compare": ["compare", "--paths", "sharp,random", "--strategies", "td2,pid",
                    "--sizes", "20", "--runs", "3", "--steps", "100"],
        "tune": ["tune"],
        "specialize": ["specialize", "--path", "zigzag", "--agents", "100", "--steps", "300"],
    }
    bad = []
    for name, args in commands.items():
        out = tmp_path / name
        snaps = []
        for _ in range(2):
            assert main(args + ["--out", str(out)]) == 0
            snaps.append(_snapshot(out))
        if snaps[0] != snaps[1]:
            bad.append(name)
    report(7, not bad, f"byte-identical CSVs on repeat for {len(commands) - len(bad)}/4 commands")
    assert not bad


def test_c8_td0_immutability_and_partition(grid, spec_runs):
    unchanged = True
    for path in PATH_KINDS:
        rec = simulate(ExperimentConfig().make_path(path), TD0(), 100, SimParams(timesteps=500), seed=3)
        unchanged &= rec.final_agents.thresholds.tobytes() == rec.initial_agents.thresholds.tobytes()
    partition = bool(PARTITION_LOG) and all(PARTITION_LOG)
    report(8, unchanged and partition, f"TD0 thresholds bit-identical after 500 steps on 5 paths: "
           f"{unchanged}; counts partition the swarm in {sum(PARTITION_LOG)}/{len(PARTITION_LOG)} runs")
    assert unchanged and partition
