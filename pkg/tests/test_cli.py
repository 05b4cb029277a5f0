import json
import os
import subprocess
import sys

import pytest

from gainterm.cli import run


def _lines(capsys):
    return capsys.readouterr().out.splitlines()


def test_symbol_both(capsys):
    assert run(["symbol", "--x", "0,0,20", "--xi", "20,0,0", "--gamma", "1", "--method", "both"]) == 0
    stamp, head, row = _lines(capsys)
    assert stamp.startswith("# gainterm") and "config_hash=" in stamp and "seed=12345" in stamp
    cols = dict(zip(head.split(","), row.split(",")))
    assert {"re_quad", "re_stat", "rel_err"} <= set(cols)
    assert float(cols["rel_err"]) < 1e-8


def test_qplus_mass_check(capsys):
    assert run(["qplus", "--gamma", "0", "--f", "gaussian", "--g", "gaussian",
                "--check", "mass", "--method", "sphere"]) == 0
    out = _lines(capsys)
    rel = float(out[-1].split()[0].split("=")[1])
    assert rel < 1e-4 and out[-1].endswith("pass")


def test_qplus_grid_output(tmp_path, capsys):
    path = tmp_path / "q.gf"
    assert run(["--seed", "7", "qplus", "--f", "gaussian(w=0.9)", "--g", "gaussian",
                "--gamma", "1", "--method", "sphere", "--output", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "GFv1 16 8.0"
    assert "seed=7" in lines[1] and "config_hash=" in lines[1]
    assert len(lines) == 2 + 16 ** 3


def test_radon_and_norms(capsys):
    assert run(["radon", "--h", "gaussian", "--points", "1,0,0;0,2,0", "--gamma", "1"]) == 0
    out = _lines(capsys)
    assert out[1] == "vx,vy,vz,value" and len(out) == 4
    assert run(["norms", "--f", "gaussian", "--kind", "hom", "--alpha", "1"]) == 0
    out = _lines(capsys)
    assert out[1] == "norm,value" and out[2].startswith("Hdot^1,")


def test_verify_writes_reports(tmp_path, capsys):
    out = tmp_path / "rep"
    assert run(["--out", str(out), "verify", "partition", "--format", "json,csv,md"]) == 0
    files = sorted(os.listdir(out))
    assert files == ["partition.csv", "partition.json", "partition.md", "partition.timing.json"]
    d = json.loads((out / "partition.json").read_text())
    assert d["schema"] == "ERv1" and d["passed"]
    for f in ("partition.csv", "partition.json", "partition.md"):
        text = (out / f).read_text()
        assert d["meta"]["config_hash"] in text and "12345" in text


def test_verify_failure_exit_code(tmp_path, capsys):
    out = tmp_path / "rep"
    # the literal omega_- Hessian check fails, so the suite exits 1 and names it
    assert run(["--out", str(out), "verify", "geometry", "--trials", "5"]) == 1
    assert "hessian_minus_literal" in capsys.readouterr().out
    assert run(["report", str(out / "geometry.json")]) == 1
    assert "FAIL" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["--bogus"],
    ["symbol", "--x", "1,2", "--xi", "1,0,0"],
    ["verify", "nosuch"],
    ["verify", "partition", "--format", "xml"],
    ["qplus", "--f", "gauss(", "--g", "gaussian"],
    [],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2
    assert "usage:" in capsys.readouterr().err or argv[:1] in (["verify"],)


def test_unknown_flag_prints_help(capsys):
    assert run(["symbol", "--nope"]) == 2
    err = capsys.readouterr().err
    assert "function grammar" in err and "--xi" in err


def test_domain_errors_are_usage_errors(capsys):
    assert run(["symbol", "--x", "0,0,1", "--xi", "1,0,0", "--method", "stationary"]) == 2
    assert "ValidityError" in capsys.readouterr().err


def test_config_errors(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GAINTERM_GRID_N", "20")
    assert run(["config"]) == 2
    assert "grid.n" in capsys.readouterr().err
    monkeypatch.setenv("GAINTERM_GRID_N", "32")
    assert run(["config"]) == 0
    assert "n = 32" in capsys.readouterr().out


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "gainterm.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("gainterm ")
