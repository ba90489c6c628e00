#!/usr/bin/env python3
"""Race the four root-search strategies on planted-motif databases.

All strategies must land on the same root frequency and testable set, so the
interesting columns are cost: how many miner invocations each one spent, how
many patterns those runs expanded, and wall time. The script re-checks the
agreement on every database and aborts loudly if it ever breaks.

Typical use:

    python3 scripts/benchmark_strategies.py --sizes 50,100,200 --seeds 100,101,102
"""

from __future__ import annotations

import argparse
import sys
from statistics import median

sys.path.insert(0, "src")

from sigmine.mining import MinerConfig, code_string
from sigmine.search import STRATEGIES, find_root
from sigmine.synth import planted_database


def parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def fingerprint(result, db):
    codes = tuple(sorted(code_string(p.code, db) for p in result.testable))
    return (result.min_testable_frequency, result.root_frequency, codes)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=parse_int_list, default=[50, 100, 200],
                    help="comma-separated database sizes (graphs)")
    ap.add_argument("--seeds", type=parse_int_list, default=[100, 101, 102],
                    help="comma-separated generator seeds")
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--tail", choices=["two", "left", "right"], default="two")
    ap.add_argument("--motif-size", type=int, default=4)
    ap.add_argument("--background-vertices", type=int, default=8)
    ap.add_argument("--edge-probability", type=float, default=0.15)
    ap.add_argument("--max-vertices", type=int, default=0,
                    help="pattern size cap, 0 for unlimited")
    args = ap.parse_args()

    config = MinerConfig(
        min_frequency=1,
        max_vertices=args.max_vertices or None,
    )

    header = (
        f"{'graphs':>6} {'seed':>5} {'strategy':<12} {'sigma_rt':>8} "
        f"{'testable':>8} {'invocations':>11} {'expanded':>9} {'seconds':>8}"
    )
    print(header)
    print("-" * len(header))

    per_strategy: dict[str, list[tuple[int, int, float]]] = {
        name: [] for name in STRATEGIES
    }
    for size in args.sizes:
        for seed in args.seeds:
            db = planted_database(
                size,
                seed,
                motif_size=args.motif_size,
                background_vertices=args.background_vertices,
                edge_probability=args.edge_probability,
            )
            reference = None
            for name in STRATEGIES:
                result = find_root(db, args.alpha, config, args.tail, name)
                fp = fingerprint(result, db)
                if reference is None:
                    reference = fp
                elif fp != reference:
                    print(
                        f"strategy disagreement on size={size} seed={seed}: "
                        f"{name} diverged",
                        file=sys.stderr,
                    )
                    return 1
                per_strategy[name].append(
                    (result.fsm_invocations, result.patterns_expanded,
                     result.wall_time_s)
                )
                print(
                    f"{size:>6} {seed:>5} {name:<12} "
                    f"{result.root_frequency!s:>8} {len(result.testable):>8} "
                    f"{result.fsm_invocations:>11} {result.patterns_expanded:>9} "
                    f"{result.wall_time_s:>8.3f}"
                )
            print()

    print("medians over all runs")
    for name in STRATEGIES:
        rows = per_strategy[name]
        inv = median(r[0] for r in rows)
        exp = median(r[1] for r in rows)
        sec = median(r[2] for r in rows)
        print(f"  {name:<12} invocations={inv:<6g} expanded={exp:<8g} seconds={sec:.3f}")
    print("all strategies agreed on every database")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
