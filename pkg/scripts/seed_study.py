#!/usr/bin/env python3
"""Multi-seed robustness study of the scheduler comparison.

Runs every cell for seeds 1..N in parallel and prints per-seed totals,
the afmt/rr ratios, and the background-dip depths.

Usage: python scripts/seed_study.py [N_SEEDS]
"""

import sys
from concurrent.futures import ProcessPoolExecutor

from afmtsim.metrics import goodput_series
from afmtsim.scenario import run_cell

CELLS = (("three-sub", "afmt"), ("three-sub", "rr"), ("two-sub", "afmt"),
         ("two-sub", "rr"), ("single-path", "rr"))


def main(n_seeds: int) -> int:
    seeds = range(1, n_seeds + 1)
    jobs = [(v, s, seed) for seed in seeds for v, s in CELLS]
    with ProcessPoolExecutor() as ex:
        recs = list(ex.map(run_cell, *zip(*jobs)))
    by_key = {(v, s, seed): r for (v, s, seed), r in zip(jobs, recs)}

    print(f"{'seed':>4} {'3s-afmt':>9} {'3s-rr':>7} {'single':>8} "
          f"{'r3':>5} {'2s-afmt':>9} {'2s-rr':>7} {'r2':>5} {'dip-afmt':>9} {'dip-rr':>7}")
    for seed in seeds:
        a3 = by_key[("three-sub", "afmt", seed)]
        r3 = by_key[("three-sub", "rr", seed)]
        sp = by_key[("single-path", "rr", seed)]
        a2 = by_key[("two-sub", "afmt", seed)]
        r2 = by_key[("two-sub", "rr", seed)]

        def rel_drop(rec):
            g = goodput_series(rec)
            pre = sum(g[5:9]) / 4
            dip = sum(g[9:16]) / 7
            return 1 - dip / pre

        print(f"{seed:>4} {a3.total_mib:>9.2f} {r3.total_mib:>7.2f} {sp.total_mib:>8.2f} "
              f"{a3.total_mib / r3.total_mib:>5.2f} {a2.total_mib:>9.2f} "
              f"{r2.total_mib:>7.2f} {a2.total_mib / r2.total_mib:>5.2f} "
              f"{rel_drop(a3):>9.0%} {rel_drop(r3):>7.0%}")
    return 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 10))
