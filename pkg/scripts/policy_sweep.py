#!/usr/bin/env python3
"""Sweep the async threshold for one generated program and tabulate the
resulting mode split and timing shape.

With overhead 0 and overlap 0 the root time is threshold-invariant;
nonzero knobs show the policy's cost/benefit curve instead.
"""

import argparse

from atria.gentrace import PolicyConfig, generate_program, simulate
from atria.metrics import exclusive_times
from atria.model import ExecutionMode
from atria.tree import build_expression_tree


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--depth", type=int, default=5)
    parser.add_argument("--branching", type=int, default=3)
    parser.add_argument("--overhead", type=int, default=2_000)
    parser.add_argument("--overlap", type=float, default=0.5)
    parser.add_argument("--thresholds", type=int, nargs="*",
                        default=[0, 10_000, 50_000, 100_000, 250_000,
                                 500_000, 1_000_000, 10 ** 12])
    args = parser.parse_args()

    skeleton = generate_program(args.seed, args.depth, args.branching)
    print(f"program: seed={args.seed} depth={args.depth} "
          f"branching={args.branching}  "
          f"overhead={args.overhead} ns  overlap={args.overlap}")
    print(f"{'threshold':>13}  {'async':>5}  {'sync':>5}  "
          f"{'root incl ns':>14}  {'sum excl ns':>14}  {'slack ns':>12}")

    for threshold in args.thresholds:
        policy = PolicyConfig(threshold_ns=threshold,
                              async_overhead_ns=args.overhead,
                              overlap_fraction=args.overlap)
        run = simulate(skeleton, policy)
        tree = build_expression_tree(run)
        values, slack = exclusive_times(tree)
        n_async = sum(1 for n in run.nodes if n.mode is ExecutionMode.ASYNC)
        print(f"{threshold:>13}  {n_async:>5}  {len(run.nodes) - n_async:>5}  "
              f"{run.node(tree.root).inclusive_time_ns:>14}  "
              f"{sum(values.values()):>14}  {sum(slack.values()):>12}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
