"""Command-line entry points: configs, reports, and exit codes."""
import csv
import json

import pytest

from translocal import cli


def run_cli(args):
    return cli.main(args)


def test_list_names_all_catalogue_maps(capsys):
    assert run_cli(["list"]) == 0
    out = capsys.readouterr().out
    for name in ("tripling", "pomeau-manneville", "staircase"):
        assert name in out


def write_config(path, text):
    path.write_text(text)
    return str(path)


def test_run_translocal_writes_csv_and_json(tmp_path, capsys):
    cfg = write_config(tmp_path / "exp.ini", """
[experiment]
kind = translocal
system = tripling
point = circle:0.3
omega = 0.5

[schedule]
n_min = 6
n_max = 12
""")
    csv_path = tmp_path / "out.csv"
    json_path = tmp_path / "out.json"
    code = run_cli(["run", cfg, "--csv", str(csv_path),
                    "--json", str(json_path)])
    assert code == 0
    rows = list(csv.DictReader(csv_path.open()))
    assert len(rows) == 1
    assert list(rows[0]) == list(cli.CSV_COLUMNS)
    assert rows[0]["system"] == "tripling"
    assert float(rows[0]["rel_error"]) < 0.10
    summary = json.loads(json_path.read_text())
    assert summary["passed"] is True
    assert summary["rows"] == 1


def test_runs_are_deterministic(tmp_path, capsys):
    cfg = write_config(tmp_path / "exp.ini", """
[experiment]
kind = translocal
system = tripling
point = circle:0.3
omega = 0.4

[schedule]
n_min = 6
n_max = 10
""")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli(["run", cfg, "--csv", str(a)])
    run_cli(["run", cfg, "--csv", str(b)])
    assert a.read_text() == b.read_text()


def test_unknown_system_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path / "bad.ini", """
[experiment]
kind = translocal
system = nosuchmap
point = circle:0.3
""")
    assert run_cli(["run", cfg]) == 2
    assert "nosuchmap" in capsys.readouterr().err


def test_missing_section_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path / "empty.ini", "[other]\nx = 1\n")
    assert run_cli(["run", cfg]) == 2


def test_kraft_config(tmp_path, capsys):
    cfg = write_config(tmp_path / "kraft.ini", """
[experiment]
kind = kraft
lengths = 1,2
""")
    assert run_cli(["run", cfg]) == 0
    out = capsys.readouterr().out
    assert "0.4812" in out


def test_lyapunov_config(tmp_path, capsys):
    cfg = write_config(tmp_path / "lyap.ini", """
[experiment]
kind = lyapunov
system = tripling
point = circle:0.3
""")
    assert run_cli(["run", cfg]) == 0
    out = capsys.readouterr().out
    assert "1.0986" in out
