"""Command-line entry point: ``pidswarm {run,compare,tune,specialize}``.

Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 tuning failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import fields, replace
from pathlib import Path

from pidswarm.analysis import aggregate_runs, summarize
from pidswarm.config import ConfigError, ExperimentConfig, load_config
from pidswarm.runner import RunSpec, run_batch
from pidswarm.tuning import NoOscillationFound, find_ultimate, zn_gains
from pidswarm.types import TASK_LABELS

log = logging.getLogger("pidswarm")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_TUNING = 0, 1, 2, 3

# Short flags for the most used keys; every config key also gets --key-name.
ALIASES = {
    "agents": "n_agents",
    "steps": "timesteps",
    "runs": "n_runs",
    "seed": "base_seed",
    "out": "output_dir",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def fmt(v) -> str:
    # repr round-trips floats exactly
    return repr(float(v)) if isinstance(v, float) else str(v)


def write_csv(path: Path, echo: list[tuple[str, str]], header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        for key, value in echo:
            fh.write(f"# {key} = {value}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _prepare_out(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write-test"
    probe.write_text("")
    probe.unlink()
    return out


def _run_specs(cfg: ExperimentConfig, path=None, strategy=None, n_agents=None, record_specialty=False):
    return [
        RunSpec(
            path=cfg.make_path(path),
            strategy=cfg.make_strategy(strategy),
            n_agents=cfg.n_agents if n_agents is None else n_agents,
            params=cfg.sim_params(),
            seed=cfg.base_seed + r,
            record_specialty=record_specialty,
        )
        for r in range(cfg.n_runs)
    ]


RUN_HEADER = (
    ["time", "target_x", "target_y", "tracker_x", "tracker_y", "distance"]
    + [f"spec_{t}" for t in TASK_LABELS]
    + [f"act_{t}" for t in TASK_LABELS]
    + ["act_idle"]
)


def cmd_run(cfg: ExperimentConfig) -> list[Path]:
    out = _prepare_out(cfg)
    records = run_batch(_run_specs(cfg))
    written = []
    summaries = []
    for r, rec in enumerate(records):
        rows = (
            [int(rec.time[k]), *rec.target[k], *rec.tracker[k], rec.distance[k],
             *map(int, rec.specialist_counts[k]), *map(int, rec.action_counts[k])]
            for k in range(len(rec))
        )
        p = out / f"run_{r}.csv"
        write_csv(p, cfg.echo() + [("seed", str(rec.seed))], RUN_HEADER, rows)
        written.append(p)
        summaries.append(summarize(rec))

    agg = aggregate_runs(summaries)
    header = (
        ["run", "seed", "mean_distance", "std"]
        + [f"var_full_{t}" for t in TASK_LABELS]
        + [f"var_last100_{t}" for t in TASK_LABELS]
        + ["note"]
    )
    rows = [
        [r, s.seed, s.mean_distance, "", *map(float, s.variance_full), *map(float, s.variance_last), ""]
        for r, s in enumerate(summaries)
    ]
    rows.append(["aggregate", "", agg.mean, agg.std] + [""] * 8 + ["degenerate" if agg.degenerate else ""])
    p = out / "summary.csv"
    write_csv(p, cfg.echo(), header, rows)
    written.append(p)
    return written


def compare_grid(cfg: ExperimentConfig):
    """Yield ``(path, strategy, n_agents, Aggregate)`` for every grid cell."""
    cells = [(p, s, n) for p in cfg.paths for s in cfg.strategies for n in cfg.sizes]
    specs = [spec for (p, s, n) in cells for spec in _run_specs(cfg, p, s, n)]
    summaries = run_batch(specs, summaries_only=True)
    k = cfg.n_runs
    for i, (p, s, n) in enumerate(cells):
        yield p, s, n, aggregate_runs(summaries[i * k : (i + 1) * k])


def cmd_compare(cfg: ExperimentConfig) -> Path:
    if not (cfg.paths and cfg.strategies and cfg.sizes):
        raise ConfigError("compare grid is empty")
    out = _prepare_out(cfg)
    rows = [[p, s, n, agg.mean, agg.std] for p, s, n, agg in compare_grid(cfg)]
    path = out / "compare.csv"
    write_csv(path, cfg.echo(), ["path", "strategy", "n_agents", "mean_of_means", "std"], rows)
    return path


def cmd_tune(cfg: ExperimentConfig) -> Path:
    out = _prepare_out(cfg)
    u = find_ultimate(cfg.n_agents, cfg.sim_params(), cfg.base_seed, cfg.sweep(),
                      cfg.make_strategy("pid").guard)
    g = zn_gains(u)
    path = out / "gains.csv"
    write_csv(path, cfg.echo(), ["ku", "pu", "kp", "ki", "kd"], [[u.ku, u.pu, g.kp, g.ki, g.kd]])
    return path


def cmd_specialize(cfg: ExperimentConfig) -> list[Path]:
    out = _prepare_out(cfg)
    spec = _run_specs(replace(cfg, n_runs=1), record_specialty=True)[0]
    (rec,) = run_batch([spec], workers=1)
    labels = [TASK_LABELS[i] for i in range(4)]
    echo = cfg.echo() + [("seed", str(rec.seed))]
    p1 = out / "specialty.csv"
    write_csv(
        p1, echo, ["time"] + [f"agent_{i}" for i in range(rec.specialty.shape[1])],
        ([int(rec.time[k])] + [labels[j] for j in rec.specialty[k]] for k in range(len(rec))),
    )
    p2 = out / "counts.csv"
    write_csv(
        p2, echo, ["time", *TASK_LABELS],
        ([int(rec.time[k]), *map(int, rec.specialist_counts[k])] for k in range(len(rec))),
    )
    return [p1, p2]


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "tune": cmd_tune,
    "specialize": cmd_specialize,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pidswarm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("-v", "--verbose", action="store_true")
        for alias, key in ALIASES.items():
            p.add_argument(f"--{alias}", dest=key, metavar=key.upper())
        for f in fields(ExperimentConfig):
            if f.name in ALIASES.values():
                continue
            p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, metavar="VALUE")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    overrides = {
        f.name: getattr(args, f.name)
        for f in fields(ExperimentConfig)
        if getattr(args, f.name, None) is not None
    }
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoOscillationFound as exc:
        print(f"tuning failed: {exc}", file=sys.stderr)
        return EXIT_TUNING
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for p in result if isinstance(result, list) else [result]:
        log.info("wrote %s", p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
