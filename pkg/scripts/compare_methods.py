#!/usr/bin/env python3
"""Mean target-tracker distance for every path x method x swarm size.

Prints a table and writes compare.csv (same schema as ``pidswarm compare``).
"""

import argparse
import csv
import sys

from pidswarm.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=30)
    ap.add_argument("--steps", type=int, default=500)
    ap.add_argument("--out", default="results/compare")
    args = ap.parse_args()

    code = cli_main(["compare", "--runs", str(args.runs), "--steps", str(args.steps), "--out", args.out])
    if code:
        return code

    with open(f"{args.out}/compare.csv") as fh:
        rows = list(csv.DictReader(l for l in fh if not l.startswith("#")))
    print(f"{'path':8s} {'n':>4s}  " + "  ".join(f"{s:>14s}" for s in ("td0", "td1", "td2", "td3", "pid")))
    for (path, n) in dict.fromkeys((r["path"], r["n_agents"]) for r in rows):
        cells = {r["strategy"]: r for r in rows if r["path"] == path and r["n_agents"] == n}
        print(f"{path:8s} {n:>4s}  " + "  ".join(
            f"{float(cells[s]['mean_of_means']):7.2f}±{float(cells[s]['std']):5.2f}" for s in cells))
    return 0


if __name__ == "__main__":
    sys.exit(main())
