"""EstimateReport (schema ERv1) and its JSON / CSV / markdown serializations.

Serialization is deterministic: keys sorted, floats written with ``repr``,
no timestamps. Wall-clock timings live in a separate sidecar file so that
reports from identical seeds and configs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Optional

SCHEMA = "ERv1"
FORMATS = ("json", "csv", "md")


@dataclass
class Check:
    name: str
    passed: bool
    value: Optional[float]
    threshold: Optional[float]
    detail: str = ""
    asserted: bool = True

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "value": _clean(self.value),
                "threshold": _clean(self.threshold), "detail": self.detail,
                "asserted": bool(self.asserted)}


def check_le(name, value, threshold, detail="", asserted=True) -> Check:
    ok = value is not None and math.isfinite(value) and value <= threshold
    return Check(name, ok, value, threshold, detail, asserted)


@dataclass
class EstimateReport:
    suite: str
    meta: dict
    checks: list = field(default_factory=list)
    trials: list = field(default_factory=list)
    columns: tuple = ()
    aggregate: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)  # not serialized into the report

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.asserted)

    @property
    def failures(self) -> list:
        return [c.name for c in self.checks if c.asserted and not c.passed]

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "meta": _clean(self.meta),
            "passed": self.passed,
            "failures": self.failures,
            "checks": [c.as_dict() for c in self.checks],
            "aggregate": _clean(self.aggregate),
            "columns": list(self.columns),
            "trials": [_clean(t) for t in self.trials],
        }


def _clean(obj: Any):
    """JSON-safe copy; non-finite floats become strings so the file stays valid."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _stamp(report: EstimateReport) -> str:
    m = report.meta
    return f"{SCHEMA} suite={report.suite} seed={m.get('seed')} config_hash={m.get('config_hash')}"


def to_json(report: EstimateReport) -> str:
    return json.dumps(report.as_dict(), sort_keys=True, indent=1) + "\n"


def _cell(v) -> str:
    v = _clean(v)
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(report: EstimateReport) -> str:
    buf = io.StringIO()
    buf.write(f"# {_stamp(report)}\n")
    cols = list(report.columns)
    if cols:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for t in report.trials:
            w.writerow([_cell(t.get(c)) for c in cols])
    return buf.getvalue()


def _md_num(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


def to_md(report: EstimateReport) -> str:
    lines = [f"# {report.suite} suite", "", f"`{_stamp(report)}`", "",
             f"Result: **{'PASS' if report.passed else 'FAIL'}**", ""]
    if report.failures:
        lines += ["Failing checks: " + ", ".join(report.failures), ""]
    lines += ["| check | result | value | threshold | detail |", "|---|---|---|---|---|"]
    for c in report.checks:
        res = ("pass" if c.passed else "FAIL") if c.asserted else "info"
        lines.append(f"| {c.name} | {res} | {_md_num(c.value)} | {_md_num(c.threshold)} | {c.detail} |")
    lines.append("")
    if report.aggregate:
        lines += ["## Aggregate", "", "```",
                  json.dumps(_clean(report.aggregate), sort_keys=True, indent=1), "```", ""]
    lines.append(f"{len(report.trials)} trial rows.")
    return "\n".join(lines) + "\n"


_WRITERS = {"json": to_json, "csv": to_csv, "md": to_md}


def emit_report(report: EstimateReport, fmt: str, out_dir: str) -> str:
    """Write one serialization into ``out_dir`` and return the path."""
    if fmt not in _WRITERS:
        raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{report.suite}.{fmt}")
    with open(path, "w", newline="") as fh:
        fh.write(_WRITERS[fmt](report))
    return path


def emit_timings(report: EstimateReport, out_dir: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{report.suite}.timing.json")
    with open(path, "w") as fh:
        json.dump(_clean(report.timings), fh, sort_keys=True, indent=1)
    return path


def load_report(path: str) -> EstimateReport:
    with open(path) as fh:
        d = json.load(fh)
    if d.get("schema") != SCHEMA:
        raise ValueError(f"{path}: not an {SCHEMA} report")
    checks = [Check(c["name"], c["passed"], c["value"], c["threshold"], c["detail"], c["asserted"])
              for c in d["checks"]]
    return EstimateReport(d["suite"], d["meta"], checks, d["trials"], tuple(d["columns"]),
                          d["aggregate"])
