from __future__ import annotations

import json

import pytest

from drinfeld.cli import dispatch, emit_report


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_binom(capsys):
    code, out, _ = run(capsys, "check-binom", "-n", "7", "-p", "5", "--window", "30")
    assert code == 0 and "pass" in out


def test_reconcile_csv(capsys):
    code, out, _ = run(capsys, "reconcile", "-d", "1", "-q", "2", "-m", "0", "-k", "10",
                       "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("d,q,m,k,lhs_dim") and len(lines) == 12


def test_membership_expectations(capsys):
    op = "1 * T{(0,1)}^4 * y{(0,1)}^[5]"
    assert run(capsys, "check-membership", "--op", op, "--expect", "accept")[0] == 0
    assert run(capsys, "check-membership", "--op", op, "--expect", "reject")[0] == 1
    assert run(capsys, "check-membership", "--op", "T{(0,1)}^^2")[0] == 2


@pytest.mark.parametrize("argv", [
    ["probe-simplicity", "-p", "3"],
    ["check-generation", "-p", "2"],
    ["basis", "-d", "2", "-j", "2"],
    ["basis", "-W", "0"],
    ["dims", "-q", "6"],
    ["basis", "-p", "4"],
    ["no-such-command"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    if "-p" in argv and argv[argv.index("-p") + 1] in ("2", "3"):
        assert "p > 3" in err


def test_json_reports_are_deterministic(capsys):
    argv = ["probe-simplicity", "-d", "1", "-W", "20", "--trials", "5", "--seed", "4"]
    code, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert code == 0 and a == b
    body = json.loads(a)
    assert set(body) == {"config", "results", "version"}
    assert body["results"]["trials"] == 5


def test_emit_report_edge_cases():
    assert json.loads(emit_report({}))["results"] == {}
    assert emit_report({"rows": []}, "csv") == ""


def test_output_file_and_io_error(tmp_path, capsys):
    path = tmp_path / "basis.txt"
    assert run(capsys, "basis", "-d", "1", "-W", "3", "--output", str(path))[0] == 0
    assert path.read_text().splitlines()[1] == "1 -1"
    bad = tmp_path / "missing" / "x.txt"
    assert run(capsys, "basis", "--output", str(bad))[0] == 3


def test_check_functor_and_dims(capsys):
    code, out, _ = run(capsys, "check-functor", "--check", "all")
    assert code == 0 and json.loads(out)["results"]["passed"]
    code, out, _ = run(capsys, "dims", "--kind", "sections", "-q", "3", "-k", "2")
    assert code == 0 and out.split() == ["0", "1", "1", "5", "2", "9"]


def test_log_level_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("DRINFELD_LOG", "DEBUG")
    assert run(capsys, "check-binom", "-n", "2")[0] == 0
