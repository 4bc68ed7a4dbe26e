"""Plot CLI tests: exit statuses and output files."""

from pathlib import Path

import pytest

from effcap_plot.cli import main

DATA = Path(__file__).parent / "data"


def test_renders_fig1(tmp_path, capsys):
    out = tmp_path / "fig1.png"
    code = main(["--kind", "vs-snr",
                 "--in", str(DATA / "fig1_mu1_m1.csv"), str(DATA / "fig1_mu1_m2.csv"),
                 "--out", str(out)])
    assert code == 0
    assert out.exists() and out.stat().st_size > 0


def test_renders_fig2(tmp_path):
    out = tmp_path / "fig2.png"
    code = main(["--kind", "vs-antennas", "--in", str(DATA / "fig2_mu1_m1.csv"),
                 "--out", str(out)])
    assert code == 0
    assert out.exists() and out.stat().st_size > 0


def test_kind_axis_mismatch_fails(tmp_path, capsys):
    code = main(["--kind", "vs-antennas", "--in", str(DATA / "fig1_mu1_m1.csv"),
                 "--out", str(tmp_path / "x.png")])
    assert code == 1
    assert "does not match" in capsys.readouterr().err


def test_bad_schema_fails(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("not,a,sweep\n1,2,3\n")
    code = main(["--kind", "vs-snr", "--in", str(bad),
                 "--out", str(tmp_path / "x.png")])
    assert code == 1
    assert "schema" in capsys.readouterr().err


def test_missing_flags_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["--kind", "vs-snr"])
    assert err.value.code == 2
