"""Command line: render charts and tables from simulator output files."""

from __future__ import annotations

import argparse
import sys

from .artifacts import ReportError, RunArtifact


def _cmd_plot(args) -> int:
    from .plotting import plot_goodput  # matplotlib import only when needed

    runs = [RunArtifact(csv_path=path) for path in args.csv]
    plot_goodput(runs, args.out)
    print(f"wrote {args.out} ({len(runs)} runs)")
    return 0


def _cmd_table(args) -> int:
    from .tables import table_compare

    runs = [RunArtifact.from_summary(path) for path in args.summary]
    print(table_compare(runs))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="afmtreport",
        description="Charts and tables from multipath-tunnel simulation runs")
    sub = parser.add_subparsers(dest="command", required=True)

    plot_p = sub.add_parser("plot", help="goodput-over-time chart from run CSVs")
    plot_p.add_argument("--out", required=True, help="image path (.svg default, .png supported)")
    plot_p.add_argument("csv", nargs="+", help="run CSV files (summaries expected alongside)")
    plot_p.set_defaults(func=_cmd_plot)

    table_p = sub.add_parser("table", help="scheduler comparison table from summaries")
    table_p.add_argument("summary", nargs="+", help="run .summary files")
    table_p.set_defaults(func=_cmd_table)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ReportError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
