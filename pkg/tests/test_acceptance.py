"""The ten desk-scale acceptance criteria; each prints one PASS/FAIL line with its runtime."""
from __future__ import annotations

import subprocess
import sys
import time

import pytest

from drinfeld.acceptance import CRITERIA, DEFAULT_SEED

BY_KEY = {key: (name, fn, budget) for key, name, fn, budget in CRITERIA}


def _report(capsys, key, passed, seconds, budget):
    name = BY_KEY[key][0]
    verdict = "PASS" if passed and seconds < budget else "FAIL"
    with capsys.disabled():
        print(f"\nacceptance {key:>2} {name:<36} {verdict}  {seconds:7.2f}s (budget {budget:g}s)")


@pytest.mark.parametrize("key", [k for k, *_ in CRITERIA if k != "10"])
def test_criterion(key, capsys):
    name, fn, budget = BY_KEY[key]
    t = time.perf_counter()
    res = fn(DEFAULT_SEED)
    seconds = time.perf_counter() - t
    _report(capsys, key, res["passed"], seconds, budget)
    assert res["passed"], res
    assert seconds < budget


def test_criterion_10_cli_reports_are_byte_identical(tmp_path, capsys):
    budget = BY_KEY["10"][2] * 4
    t = time.perf_counter()
    outs = []
    for run in range(2):
        path = tmp_path / f"report{run}.json"
        proc = subprocess.run([sys.executable, "-m", "drinfeld.cli", "accept", "--profile",
                               "desk", "--seed", str(DEFAULT_SEED), "--output", str(path)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs.append(path.read_bytes())
    seconds = time.perf_counter() - t
    same = outs[0] == outs[1]
    _report(capsys, "10", same, seconds, budget)
    assert same
