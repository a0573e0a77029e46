"""Goodput-over-time chart rendering."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.fonttype"] = "none"   # keep legend text as text
matplotlib.rcParams["svg.hashsalt"] = "afmtreport"  # reproducible ids

import matplotlib.pyplot as plt

from .artifacts import ReportError, RunArtifact, load_run


def plot_goodput(runs: list[RunArtifact], out_image_path: str) -> None:
    """One line per run (x seconds, y MiB/s); legend carries the totals.

    SVG output is deterministic; PNG is selected by the file extension.
    """
    if not runs:
        raise ReportError("no runs given; nothing to plot")
    loaded = [load_run(r) for r in runs]
    widths = {run.bin_seconds for run in loaded}
    if len(widths) > 1:
        raise ReportError(f"inconsistent bin widths across runs: {sorted(widths)}")

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for run in loaded:
        ax.plot(run.seconds, run.mib_per_s, drawstyle="steps-post",
                label=f"{run.label} ({run.total_mib:.2f} MiB)")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("goodput [MiB/s]")
    ax.set_ylim(bottom=0)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper right")
    fig.tight_layout()
    fmt = "png" if out_image_path.lower().endswith(".png") else "svg"
    metadata = {"Date": None} if fmt == "svg" else None
    fig.savefig(out_image_path, format=fmt, metadata=metadata)
    plt.close(fig)
