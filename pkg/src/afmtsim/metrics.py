"""Per-run measurement record, goodput binning, and CSV/summary emission."""

from __future__ import annotations

from dataclasses import dataclass

from .netsim import Engine, Packet, SECOND

MIB = float(1 << 20)


@dataclass
class MetricsRecord:
    variant: str
    scheduler: str
    seed: int
    sim_duration: int  # seconds
    bin_seconds: int
    flow_bins: list[list[int]]      # [flow][second] delivered payload bytes
    reordered: list[int]
    retransmits: list[int]
    subtunnel_bytes: list[int]
    queue_drops: dict[str, int]
    injected_bytes: list[int]       # distinct payload bytes handed to each flow
    link_injected: int = 0
    link_delivered: int = 0
    link_dropped: int = 0
    link_in_flight: int = 0

    @property
    def total_bins(self) -> list[int]:
        return [sum(col) for col in zip(*self.flow_bins)]

    @property
    def per_flow_bytes(self) -> list[int]:
        return [sum(bins) for bins in self.flow_bins]

    @property
    def total_bytes(self) -> int:
        return sum(self.per_flow_bytes)

    @property
    def total_mib(self) -> float:
        return self.total_bytes / MIB


class MetricsCollector:
    """Client-side delivery accounting hooked into the payload receivers.

    Goodput counts the first copy of each distinct segment (duplicates
    from retransmissions are excluded); a delivery is reordered when its
    per-flow emission sequence number is below the maximum already seen.
    """

    def __init__(self, engine: Engine, n_flows: int, duration_s: int) -> None:
        self.engine = engine
        self.duration = duration_s
        self.flow_bins = [[0] * duration_s for _ in range(n_flows)]
        self.reordered = [0] * n_flows
        self._seen: list[set[int]] = [set() for _ in range(n_flows)]
        self._max_seq = [-1] * n_flows

    def hook(self, flow_idx: int):
        bins = self.flow_bins[flow_idx]
        seen = self._seen[flow_idx]

        def on_data(pkt: Packet) -> None:
            if pkt.seq < self._max_seq[flow_idx]:
                self.reordered[flow_idx] += 1
            else:
                self._max_seq[flow_idx] = pkt.seq
            if pkt.segno not in seen:
                seen.add(pkt.segno)
                sec = self.engine.now // SECOND
                if sec < self.duration:
                    bins[sec] += pkt.data_len

        return on_data


def goodput_series(metrics: MetricsRecord, bin_seconds: int = 1) -> list[float]:
    """Delivered payload in MiB/s per bin; bins partition the run exactly."""
    if bin_seconds <= 0 or metrics.sim_duration % bin_seconds != 0:
        raise ValueError(f"bin {bin_seconds}s does not divide {metrics.sim_duration}s")
    totals = metrics.total_bins
    series = []
    for start in range(0, metrics.sim_duration, bin_seconds):
        chunk = sum(totals[start:start + bin_seconds])
        series.append(chunk / MIB / bin_seconds)
    return series


def write_csv(metrics: MetricsRecord, path: str) -> None:
    """Emit the per-second CSV and the key=value summary next to it."""
    if len(metrics.flow_bins) != 3:
        raise ValueError("CSV schema is fixed at three payload flows")
    lines = ["time_s,flow0_bytes,flow1_bytes,flow2_bytes,total_bytes"]
    totals = metrics.total_bins
    for t in range(metrics.sim_duration):
        cols = ",".join(str(metrics.flow_bins[k][t]) for k in range(len(metrics.flow_bins)))
        lines.append(f"{t},{cols},{totals[t]}")
    _write(path, "\n".join(lines) + "\n")

    total = metrics.total_bytes
    summary = [
        f"variant={metrics.variant}",
        f"scheduler={metrics.scheduler}",
        f"seed={metrics.seed}",
        f"sim_duration_s={metrics.sim_duration}",
        f"bin_seconds={metrics.bin_seconds}",
        f"total_bytes={total}",
        f"total_mib={total / MIB:.2f}",
    ]
    for k, n in enumerate(metrics.reordered):
        summary.append(f"flow{k}_reordered={n}")
    for k, n in enumerate(metrics.retransmits):
        summary.append(f"flow{k}_retransmits={n}")
    sub_total = sum(metrics.subtunnel_bytes)
    for i, n in enumerate(metrics.subtunnel_bytes):
        share = n / sub_total if sub_total else 0.0
        summary.append(f"subtunnel{i}_bytes={n}")
        summary.append(f"subtunnel{i}_share={share:.4f}")
    summary.append(f"queue_drops_total={sum(metrics.queue_drops.values())}")
    _write(path + ".summary", "\n".join(summary) + "\n")


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
