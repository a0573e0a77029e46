import pytest

from afmtreport.artifacts import ReportError, RunArtifact, load_run
from conftest import ramp_bins, write_run


def test_load_run_round_trip(tmp_path):
    bins = ramp_bins(50_000, n=10)
    csv = write_run(tmp_path, "three-sub", "afmt", bins)
    run = load_run(RunArtifact(csv_path=str(csv)))
    assert run.label == "afmt three-sub"
    assert run.seconds == list(range(10))
    assert run.total_bytes == sum(sum(b) for b in bins)
    assert run.bin_seconds == 1
    assert len(run.mib_per_s) == 10


def test_single_path_label_drops_scheduler(tmp_path):
    csv = write_run(tmp_path, "single-path", "-", ramp_bins(1000, n=4))
    assert load_run(RunArtifact(csv_path=str(csv))).label == "single-path"


def test_malformed_cell_names_row_and_column(tmp_path):
    csv = write_run(tmp_path, "three-sub", "afmt", ramp_bins(1000, n=4))
    text = csv.read_text().splitlines()
    cols = text[3].split(",")
    cols[1] = "oops"
    text[3] = ",".join(cols)
    csv.write_text("\n".join(text) + "\n")
    with pytest.raises(ReportError, match=r"row 4.*column 2"):
        load_run(RunArtifact(csv_path=str(csv)))


def test_wrong_header_rejected(tmp_path):
    csv = write_run(tmp_path, "three-sub", "afmt", ramp_bins(1000, n=4))
    csv.write_text("nope\n" + "\n".join(csv.read_text().splitlines()[1:]))
    with pytest.raises(ReportError, match="row 1"):
        load_run(RunArtifact(csv_path=str(csv)))


def test_summary_total_must_match_csv(tmp_path):
    csv = write_run(tmp_path, "three-sub", "afmt", ramp_bins(1000, n=4))
    summary = csv.with_suffix(".csv.summary")
    summary.write_text(summary.read_text().replace("total_bytes=", "total_bytes=1"))
    with pytest.raises(ReportError, match="column sum"):
        load_run(RunArtifact(csv_path=str(csv)))


def test_row_count_must_match_duration(tmp_path):
    csv = write_run(tmp_path, "three-sub", "afmt", ramp_bins(1000, n=4))
    summary = csv.with_suffix(".csv.summary")
    summary.write_text(summary.read_text().replace("sim_duration_s=4", "sim_duration_s=9"))
    with pytest.raises(ReportError, match="rows"):
        load_run(RunArtifact(csv_path=str(csv)))


def test_missing_summary_names_path(tmp_path):
    with pytest.raises(ReportError, match="nowhere.csv.summary"):
        load_run(RunArtifact(csv_path=str(tmp_path / "nowhere.csv")))
