import pytest

MIB = 1 << 20


def write_run(dirpath, variant, scheduler, flow_bins, seed=1):
    """Write a CSV + summary pair in the simulator's exact output schema."""
    stem = variant if scheduler == "-" else f"{variant}-{scheduler}"
    csv_path = dirpath / f"{stem}.csv"
    n = len(flow_bins[0])
    lines = ["time_s,flow0_bytes,flow1_bytes,flow2_bytes,total_bytes"]
    for t in range(n):
        cols = [flow_bins[k][t] for k in range(3)]
        lines.append(f"{t},{cols[0]},{cols[1]},{cols[2]},{sum(cols)}")
    csv_path.write_text("\n".join(lines) + "\n")

    total = sum(sum(b) for b in flow_bins)
    summary = [
        f"variant={variant}",
        f"scheduler={scheduler}",
        f"seed={seed}",
        f"sim_duration_s={n}",
        "bin_seconds=1",
        f"total_bytes={total}",
        f"total_mib={total / MIB:.2f}",
        "flow0_reordered=0",
        "flow1_reordered=0",
        "flow2_reordered=0",
        "flow0_retransmits=0",
        "flow1_retransmits=0",
        "flow2_retransmits=0",
        "queue_drops_total=0",
    ]
    (dirpath / f"{stem}.csv.summary").write_text("\n".join(summary) + "\n")
    return csv_path


def ramp_bins(scale, n=30):
    """Three flows with a recognisable per-second pattern."""
    return [[(t % 7) * scale * (k + 1) for t in range(n)] for k in range(3)]


@pytest.fixture
def sweep_dir(tmp_path):
    """A full five-cell sweep's worth of artifact files."""
    write_run(tmp_path, "three-sub", "rr", ramp_bins(40_000))
    write_run(tmp_path, "three-sub", "afmt", ramp_bins(100_000))
    write_run(tmp_path, "two-sub", "rr", ramp_bins(80_000))
    write_run(tmp_path, "two-sub", "afmt", ramp_bins(95_000))
    write_run(tmp_path, "single-path", "-", ramp_bins(70_000))
    return tmp_path
