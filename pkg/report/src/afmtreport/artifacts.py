"""Loading and validation of simulator run artifacts (CSV + summary)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

CSV_HEADER = "time_s,flow0_bytes,flow1_bytes,flow2_bytes,total_bytes"
MIB = float(1 << 20)


class ReportError(Exception):
    pass


@dataclass
class RunArtifact:
    """One simulator run: its CSV path, summary path, and display label."""

    csv_path: str
    summary_path: str = ""
    label: str = ""

    def __post_init__(self) -> None:
        if not self.summary_path:
            self.summary_path = self.csv_path + ".summary"

    @classmethod
    def from_summary(cls, summary_path: str) -> "RunArtifact":
        csv_path = summary_path[:-len(".summary")] if summary_path.endswith(".summary") else ""
        return cls(csv_path=csv_path, summary_path=summary_path)


@dataclass
class LoadedRun:
    label: str
    bin_seconds: int
    seconds: list[int]
    total_bytes_per_bin: list[int]
    summary: dict[str, str]

    @property
    def total_bytes(self) -> int:
        return sum(self.total_bytes_per_bin)

    @property
    def total_mib(self) -> float:
        return self.total_bytes / MIB

    @property
    def mib_per_s(self) -> list[float]:
        return [b / MIB / self.bin_seconds for b in self.total_bytes_per_bin]

    @property
    def variant(self) -> str:
        return self.summary.get("variant", "?")

    @property
    def scheduler(self) -> str:
        return self.summary.get("scheduler", "?")


def read_summary(path: str) -> dict[str, str]:
    if not os.path.exists(path):
        raise ReportError(f"missing summary file: {path}")
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if "=" not in line:
                raise ReportError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            out[key] = value
    return out


def load_run(artifact: RunArtifact) -> LoadedRun:
    """Parse and cross-validate one run's CSV and summary."""
    summary = read_summary(artifact.summary_path)
    path = artifact.csv_path
    if not os.path.exists(path):
        raise ReportError(f"missing CSV file: {path}")
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ReportError(f"{path}: row 1: expected header {CSV_HEADER!r}")
    seconds: list[int] = []
    totals: list[int] = []
    for row, line in enumerate(lines[1:], 2):
        cols = line.split(",")
        if len(cols) != 5:
            raise ReportError(f"{path}: row {row}: expected 5 columns, found {len(cols)}")
        try:
            values = [int(c) for c in cols]
        except ValueError as exc:
            col = next(i for i, c in enumerate(cols, 1) if not c.lstrip("-").isdigit())
            raise ReportError(f"{path}: row {row}, column {col}: not an integer") from exc
        if sum(values[1:4]) != values[4]:
            raise ReportError(f"{path}: row {row}: flow columns do not sum to total")
        seconds.append(values[0])
        totals.append(values[4])

    declared = summary.get("total_bytes")
    if declared is not None and int(declared) != sum(totals):
        raise ReportError(
            f"{artifact.summary_path}: total_bytes={declared} but CSV column sum is {sum(totals)}")
    duration = summary.get("sim_duration_s")
    bin_seconds = int(summary.get("bin_seconds", "1"))
    if duration is not None and len(totals) * bin_seconds != int(duration):
        raise ReportError(
            f"{path}: {len(totals)} rows x {bin_seconds}s bins != {duration}s run")

    label = artifact.label or default_label(summary)
    return LoadedRun(label=label, bin_seconds=bin_seconds, seconds=seconds,
                     total_bytes_per_bin=totals, summary=summary)


def default_label(summary: dict[str, str]) -> str:
    variant = summary.get("variant", "?")
    scheduler = summary.get("scheduler", "?")
    return variant if scheduler == "-" else f"{scheduler} {variant}"
