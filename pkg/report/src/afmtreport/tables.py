"""Scheduler-comparison table from run summaries."""

from __future__ import annotations

from .artifacts import MIB, ReportError, RunArtifact, read_summary

_VARIANT_ORDER = ("three-sub", "two-sub", "single-path")
_SCHED_ORDER = ("rr", "afmt")


def table_compare(runs: list[RunArtifact]) -> str:
    """Rows per variant, columns per scheduler, totals in MiB (2 decimals).

    The schedulerless single-path cell spans the scheduler columns.
    """
    if not runs:
        raise ReportError("no runs given; nothing to tabulate")
    cells: dict[tuple[str, str], float] = {}
    for run in runs:
        summary = read_summary(run.summary_path)
        variant = summary.get("variant", "?")
        scheduler = summary.get("scheduler", "?")
        key = (variant, scheduler)
        if key in cells:
            raise ReportError(f"duplicate (variant, scheduler) pair: {key}")
        cells[key] = int(summary["total_bytes"]) / MIB

    variants = [v for v in _VARIANT_ORDER if any(k[0] == v for k in cells)]
    variants += sorted({k[0] for k in cells} - set(variants))
    scheds = [s for s in _SCHED_ORDER if any(k[1] == s for k in cells)]
    scheds += sorted({k[1] for k in cells} - set(scheds) - {"-"})

    width = 12
    header = f"{'variant':<14}" + "".join(f"{s:>{width}}" for s in scheds)
    lines = [header, "-" * len(header)]
    for variant in variants:
        if (variant, "-") in cells:
            value = f"{cells[(variant, '-')]:.2f}"
            span = width * max(len(scheds), 1)
            lines.append((f"{variant:<14}" + value.center(span)).rstrip())
            continue
        row = f"{variant:<14}"
        for sched in scheds:
            value = cells.get((variant, sched))
            row += f"{'-':>{width}}" if value is None else f"{value:>{width}.2f}"
        lines.append(row)
    return "\n".join(lines)
