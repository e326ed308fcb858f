import csv
from pathlib import Path

import pytest

from thinplate.cli import main

REPO = Path(__file__).resolve().parents[1]


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _write_cfg(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


FAST = """
grid_nx = 2
grid_ny = 2
eval_times = 2
time_samples = 3
t_end = 0.5
"""


def test_eigs_stdout(capsys):
    code, out, _ = _run(capsys, "eigs")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 30
    assert float(rows[0]["alpha"]) == pytest.approx(4.435207878818885, rel=1e-14)
    # 17 significant digits survive the round trip
    assert rows[0]["alpha"] == "4.4352078788188853"
    for r in rows:
        assert float(r["bracket_lo"]) <= float(r["alpha"]) <= float(r["bracket_hi"])


def test_eigs_to_file(tmp_path, capsys):
    out_path = tmp_path / "eigs.csv"
    code, out, _ = _run(capsys, "eigs", "--out", str(out_path))
    assert code == 0
    assert out == ""
    rows = list(csv.DictReader(out_path.read_text().splitlines()))
    assert len(rows) == 30
    assert float(rows[0]["lemma33_lo"]) <= float(rows[0]["alpha"]) <= float(
        rows[0]["lemma33_hi"]
    )


def test_solve_csv(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, FAST)
    code, out, _ = _run(capsys, "solve", "--config", cfg)
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 2 * 2 * 3 * 2
    for r in rows:
        assert r["bound_satisfied"] == "1"
        diff = float(r["value_full"]) - float(r["value_reduced"])
        assert diff == pytest.approx(float(r["diff"]), abs=1e-16)
        assert abs(diff) <= float(r["certificate_19h3"]) + float(r["truncation_slack"])


def test_solve_deterministic(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, FAST)
    _, out1, _ = _run(capsys, "solve", "--config", cfg)
    _, out2, _ = _run(capsys, "solve", "--config", cfg)
    assert out1 == out2


def test_verify_passes(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, FAST)
    code, out, _ = _run(capsys, "verify", "--config", cfg)
    assert code == 0, out
    lines = [l for l in out.splitlines() if l]
    assert all(l.startswith("PASS") for l in lines[:-1])
    assert lines[-1].startswith("OK")


def test_sweep(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, FAST + "sweep_h = 0.1,0.05\n")
    code, out, _ = _run(capsys, "sweep", "--config", cfg)
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 2
    assert float(rows[0]["h"]) == 0.1
    # the reduced model converges at least linearly in h
    assert float(rows[0]["slope"]) >= 0.9
    for r in rows:
        assert float(r["max_diff_full_vs_reduced"]) <= float(r["certificate"])


def test_exit_code_config_error(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "no_such_key = 3\n")
    code, _, err = _run(capsys, "eigs", "--config", cfg)
    assert code == 1
    assert "config" in err


def test_exit_code_config_bad_value(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "h = -0.1\n")
    code, _, err = _run(capsys, "eigs", "--config", cfg)
    assert code == 1


def test_exit_code_domain_error(tmp_path, capsys):
    # h >= pi/(2a) breaks the bracket structure: domain error, exit 2
    cfg = _write_cfg(tmp_path, "a = 1.0\nh = 2.0\n")
    code, _, err = _run(capsys, "eigs", "--config", cfg)
    assert code == 2
    assert "domain" in err


def test_exit_code_domain_error_sweep(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "a = 1.0\nsweep_h = 0.5,0.1\n")
    code, _, err = _run(capsys, "sweep", "--config", cfg)
    assert code == 2


def test_config_comments_and_blanks(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "# comment\n\nM = 4\nK = 9 # trailing comment\n")
    code, out, _ = _run(capsys, "eigs", "--config", cfg)
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 4


def test_example_config_runs(capsys):
    code, out, _ = _run(capsys, "verify", "--config", str(REPO / "docs" / "example.cfg"))
    assert code == 0
