#!/usr/bin/env python3
"""Populate a directory with demonstration traces.

Writes a handful of generated runs, including one comparison pair from
the same program under two policies, so `atria serve <dir>` has
something interesting to show.
"""

import argparse
from pathlib import Path

from atria.gentrace import PolicyConfig, generate_program, generate_run, make_comparison_pair
from atria.model import serialize_trace


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path, help="directory to fill")
    parser.add_argument("--seeds", type=int, nargs="*", default=[7, 21, 33])
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    runs = [generate_run(seed, 4, 3) for seed in args.seeds]

    # same program, before/after a uniform 25% slowdown with a lower
    # async threshold: exercises both timing deltas and mode changes
    sk = generate_program(99, 5, 3)
    runs.extend(make_comparison_pair(
        sk,
        PolicyConfig(threshold_ns=300_000),
        PolicyConfig(threshold_ns=150_000, cost_scale=1.25),
    ))

    for run in runs:
        path = args.out / f"{run.run_id}.json"
        path.write_bytes(serialize_trace(run))
        total = run.node(0).inclusive_time_ns
        print(f"{path}  {len(run.nodes):>3} nodes  {total:>10} ns")
    print(f"{len(runs)} traces written; serve with: atria serve {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
