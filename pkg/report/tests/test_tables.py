import pytest

from afmtreport.artifacts import ReportError, RunArtifact
from afmtreport.tables import table_compare
from conftest import ramp_bins, write_run


def artifacts_in(dirpath):
    return [RunArtifact.from_summary(str(p)) for p in sorted(dirpath.glob("*.summary"))]


def test_five_cell_sweep_layout(sweep_dir):
    table = table_compare(artifacts_in(sweep_dir))
    lines = table.splitlines()
    assert lines[0].split() == ["variant", "rr", "afmt"]
    body = {ln.split()[0]: ln for ln in lines[2:]}
    assert list(body) == ["three-sub", "two-sub", "single-path"]
    # scheduler columns hold the per-cell totals; single-path spans
    assert len(body["three-sub"].split()) == 3
    assert len(body["two-sub"].split()) == 3
    assert len(body["single-path"].split()) == 2


def test_single_run_table(tmp_path):
    write_run(tmp_path, "two-sub", "afmt", ramp_bins(10_000, n=5))
    table = table_compare(artifacts_in(tmp_path))
    lines = table.splitlines()
    assert lines[0].split() == ["variant", "afmt"]
    assert lines[2].split()[0] == "two-sub"


def test_duplicate_pair_rejected(tmp_path):
    write_run(tmp_path, "two-sub", "afmt", ramp_bins(10_000, n=5))
    runs = artifacts_in(tmp_path) * 2
    with pytest.raises(ReportError, match="duplicate"):
        table_compare(runs)


def test_missing_summary_names_path(tmp_path):
    missing = tmp_path / "ghost.csv.summary"
    with pytest.raises(ReportError, match="ghost.csv.summary"):
        table_compare([RunArtifact.from_summary(str(missing))])


def test_values_are_mib_with_two_decimals(tmp_path):
    bins = [[1 << 20, 1 << 19], [0, 0], [0, 0]]
    write_run(tmp_path, "three-sub", "rr", bins)
    table = table_compare(artifacts_in(tmp_path))
    assert "1.50" in table
