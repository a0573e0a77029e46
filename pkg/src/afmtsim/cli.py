"""Command-line entry point: single runs and the full scheduler sweep."""

from __future__ import annotations

import argparse
import os
import sys

from .metrics import write_csv
from .scenario import ScenarioConfig, run_scenario
from .topology import ConfigError

SWEEP_CELLS = (
    ("three-sub", "afmt"),
    ("three-sub", "rr"),
    ("two-sub", "afmt"),
    ("two-sub", "rr"),
    ("single-path", "rr"),
)


def _run_cell(variant: str, scheduler: str, seed: int, out: str):
    config = ScenarioConfig(variant=variant, scheduler=scheduler,
                            seed=seed, out_path=out)
    record = run_scenario(config)
    write_csv(record, out)
    return record


def _cmd_run(args) -> int:
    record = _run_cell(args.variant, args.scheduler, args.seed, args.out)
    print(f"{record.variant} {record.scheduler} seed={record.seed}: "
          f"{record.total_mib:.2f} MiB over {record.sim_duration} s -> {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    totals: dict[tuple[str, str], float] = {}
    for variant, scheduler in SWEEP_CELLS:
        stem = variant if variant == "single-path" else f"{variant}-{scheduler}"
        out = os.path.join(args.out, f"{stem}.csv")
        record = _run_cell(variant, scheduler, args.seed, out)
        totals[(variant, record.scheduler)] = record.total_mib
        print(f"  {stem}: {record.total_mib:.2f} MiB")
    print()
    print(f"total goodput (MiB over 30 s), seed {args.seed}")
    print(f"{'variant':<14}{'rr':>10}{'afmt':>10}")
    for variant in ("three-sub", "two-sub"):
        rr = totals[(variant, "rr")]
        afmt = totals[(variant, "afmt")]
        print(f"{variant:<14}{rr:>10.2f}{afmt:>10.2f}")
    single = totals[("single-path", "-")]
    print(f"{'single-path':<14}{single:>10.2f}  (no tunnel)")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="afmtsim",
        description="Multipath-tunnel scheduling experiments on a deterministic network simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario and write its CSV + summary")
    run_p.add_argument("--variant", required=True,
                       choices=["three-sub", "two-sub", "single-path"])
    run_p.add_argument("--scheduler", default="afmt", choices=["afmt", "rr"])
    run_p.add_argument("--seed", type=int, default=1)
    run_p.add_argument("--out", required=True, help="CSV output path")
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="run all comparison cells and print the table")
    sweep_p.add_argument("--seed", type=int, default=1)
    sweep_p.add_argument("--out", required=True, help="output directory")
    sweep_p.set_defaults(func=_cmd_sweep)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
