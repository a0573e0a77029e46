"""Command-line surface: flags, artifacts on disk, exit codes."""

import pytest

from afmtsim.cli import main


def test_run_writes_csv_and_summary(tmp_path, capsys):
    out = tmp_path / "single.csv"
    assert main(["run", "--variant", "single-path", "--seed", "2",
                 "--out", str(out)]) == 0
    assert out.exists() and (tmp_path / "single.csv.summary").exists()
    assert len(out.read_text().splitlines()) == 31
    assert "single-path" in capsys.readouterr().out


def test_invalid_variant_exits_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["run", "--variant", "mesh", "--out", "x.csv"])
    assert exc.value.code != 0


def test_unwritable_output_is_reported(tmp_path, capsys):
    out = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert main(["run", "--variant", "single-path", "--out", str(out)]) == 2
    assert "error:" in capsys.readouterr().err
