import json
import math

import pytest

from gainterm.config import Config
from gainterm.verify.common import new_report
from gainterm.verify.estimates import CSV_COLUMNS
from gainterm.verify.report import (Check, check_le, emit_report, load_report, to_csv, to_json,
                                    to_md)


def _report():
    rep = new_report("estimate", Config())
    rep.columns = CSV_COLUMNS
    rep.trials = [{"trial": 0, "gamma": 0.5, "p": 1.0, "q": 2.0, "ratio_hom": 0.1,
                   "ratio_inhom": 0.2, "ratio_LR": 0.3, "refinement_delta": 1e-3, "extra": 1}]
    rep.checks = [check_le("a", 0.5, 1.0), Check("b", False, 2.0, 1.0, "info", asserted=False)]
    rep.aggregate = {"x": math.inf, "z": 1 + 2j}
    rep.timings["total"] = 1.234
    return rep


def test_check_le_rejects_nan():
    assert not check_le("x", math.nan, 1.0).passed
    assert check_le("x", 1.0, 1.0).passed


def test_passed_ignores_info_checks():
    rep = _report()
    assert rep.passed and rep.failures == []
    rep.checks.append(check_le("c", 2.0, 1.0))
    assert not rep.passed and rep.failures == ["c"]


@pytest.mark.parametrize("fmt", ["json", "csv", "md"])
def test_byte_identical_and_stamped(tmp_path, fmt):
    a = emit_report(_report(), fmt, str(tmp_path / "a"))
    b = emit_report(_report(), fmt, str(tmp_path / "b"))
    ta, tb = open(a, "rb").read(), open(b, "rb").read()
    assert ta == tb
    text = ta.decode()
    assert "config_hash" in text and "12345" in text
    assert "1.234" not in text  # timings live in the sidecar


def test_csv_schema():
    lines = to_csv(_report()).splitlines()
    assert lines[0].startswith("# ERv1 suite=estimate seed=12345 config_hash=")
    assert lines[1] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3


def test_empty_trials_keep_aggregate():
    rep = _report()
    rep.trials = []
    d = json.loads(to_json(rep))
    assert d["trials"] == [] and d["aggregate"]["x"] == "inf"
    assert len(to_csv(rep).splitlines()) == 2
    assert "Aggregate" in to_md(rep)


def test_json_roundtrip(tmp_path):
    path = emit_report(_report(), "json", str(tmp_path))
    rep = load_report(path)
    assert rep.suite == "estimate" and rep.meta["schema"] == "ERv1"
    assert [c.name for c in rep.checks] == ["a", "b"]
    assert to_json(rep) == open(path).read()


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        emit_report(_report(), "xml", str(tmp_path))
