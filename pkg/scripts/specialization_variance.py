#!/usr/bin/env python3
"""Specialist-count variance, full run vs. last 100 steps, median over seeds.

Use ``--windup freeze`` to compare the two integral anti-windup modes.
"""

import argparse
from dataclasses import replace

import numpy as np

from pidswarm.config import ExperimentConfig
from pidswarm.paths import PATH_KINDS
from pidswarm.runner import RunSpec, run_batch
from pidswarm.strategies import STRATEGY_KINDS
from pidswarm.types import TASK_LABELS


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--agents", type=int, default=100)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--windup", choices=("reset", "freeze"), default="reset")
    args = ap.parse_args()

    cfg = replace(ExperimentConfig(), n_agents=args.agents, windup=args.windup)
    np.set_printoptions(precision=2, suppress=True)
    for path in PATH_KINDS:
        for strategy in STRATEGY_KINDS:
            specs = [RunSpec(cfg.make_path(path), cfg.make_strategy(strategy), cfg.n_agents,
                             cfg.sim_params(), seed) for seed in range(args.seeds)]
            runs = run_batch(specs, summaries_only=True)
            full = np.median([r.variance_full for r in runs], axis=0)
            last = np.median([r.variance_last for r in runs], axis=0)
            dist = np.mean([r.mean_distance for r in runs])
            print(f"{path:7s} {strategy:4s} dist {dist:7.2f}  full {dict(zip(TASK_LABELS, full.round(2)))}"
                  f"  last100 {dict(zip(TASK_LABELS, last.round(2)))}")


if __name__ == "__main__":
    main()
