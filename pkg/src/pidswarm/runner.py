"""Batch execution of seeded runs.

Run ``r`` of a batch uses seed ``base_seed + r``. Runs are independent, so a
batch may be spread over worker processes; results come back in run order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from copy import deepcopy
from dataclasses import dataclass

from pidswarm.analysis import RunRecord, RunSummary, summarize
from pidswarm.core import SimParams, simulate
from pidswarm.paths import PathGenerator
from pidswarm.strategies import StrategyConfig


@dataclass(frozen=True)
class RunSpec:
    path: PathGenerator
    strategy: StrategyConfig
    n_agents: int
    params: SimParams
    seed: int
    record_specialty: bool = False


def max_workers() -> int:
    env = os.environ.get("SWARM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def execute(spec: RunSpec) -> RunRecord:
    # PathGenerator is stateful, so each run gets a private copy.
    return simulate(
        deepcopy(spec.path),
        spec.strategy,
        spec.n_agents,
        spec.params,
        spec.seed,
        record_specialty=spec.record_specialty,
    )


def execute_summary(spec: RunSpec) -> RunSummary:
    return summarize(execute(spec))


def run_batch(specs: list[RunSpec], summaries_only: bool = False, workers: int | None = None, fn=None):
    """Execute ``specs`` and return results in order.

    ``fn`` maps a spec to a result and must be picklable (module level) when
    more than one worker is used; it defaults to :func:`execute` or
    :func:`execute_summary`.
    """
    if fn is None:
        fn = execute_summary if summaries_only else execute
    workers = min(workers or max_workers(), len(specs)) if specs else 1
    if workers <= 1:
        return [fn(s) for s in specs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, specs, chunksize=max(1, len(specs) // (4 * workers))))
