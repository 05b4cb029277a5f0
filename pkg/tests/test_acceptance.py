"""Acceptance criteria 1-11 at the pinned tolerances.

Each test records one line "criterion N: PASS|FAIL ..." which conftest prints in
the terminal summary. Criteria that cannot hold are left failing; the reasons
are in the analysis notes kept with the project.
"""

import filecmp
import math
import os
import subprocess
import sys
import time

import pytest

from gainterm.config import Config
from gainterm.verify import run_suite

pytestmark = pytest.mark.slow

LINES: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> bool:
    LINES[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def _timed(name, cfg=None, trials=None):
    t0 = time.perf_counter()
    rep = run_suite(name, cfg or Config(), trials)
    return rep, time.perf_counter() - t0


@pytest.fixture(scope="module")
def cache():
    return {}


def suite(cache, name):
    if name not in cache:
        cache[name] = _timed(name)
    return cache[name]


def test_criterion_01_partition(cache):
    rep, t = suite(cache, "partition")
    tel = rep.check("telescoping").value
    ok = rep.passed and t < 5.0
    assert record(1, ok, f"telescoping={tel:.2e} cutoff checks pass={rep.passed} runtime={t:.1f}s")


def test_criterion_02_geometry(cache):
    rep, t = suite(cache, "geometry")
    names = ("gradient", "hessian_plus", "hessian_minus_literal", "involution", "momentum", "energy")
    vals = {n: rep.check(n).value for n in names}
    ok = all(rep.check(n).passed for n in names) and t < 30.0
    detail = " ".join(f"{n}={v:.2e}" for n, v in vals.items())
    assert record(2, ok, f"{detail} (hessian_minus_corrected="
                  f"{rep.check('hessian_minus_corrected').value:.2e}) runtime={t:.1f}s")


def test_criterion_03_stationary(cache):
    rep, t = suite(cache, "stationary")
    slopes = rep.aggregate["slopes"]
    slope_ok = all(rep.check(f"slope[{k}]").passed for k in slopes)
    col = rep.check("colinear_closed_form")
    ok = slope_ok and col.passed and t < 300.0
    s = " ".join(f"{v:+.2f}" for v in slopes.values())
    assert record(3, ok, f"slopes=[{s}] max_rel_err={rep.aggregate['max_rel_err']:.1e} "
                  f"colinear={col.value:.1e} runtime={t:.0f}s")


def test_criterion_04_mass(cache):
    rep, t = suite(cache, "identity")
    m = rep.check("mass")
    tm = rep.timings["mass"]
    ok = m.passed and tm < 300.0
    assert record(4, ok, f"rel_err={m.value:.2e} ({m.detail}) runtime={tm:.0f}s")


def test_criterion_05_weak_form(cache):
    rep, _ = suite(cache, "identity")
    checks = [rep.check(f"weak_form[gamma={g:g}]") for g in (0.0, 0.5, 1.0)]
    ok = all(c.passed for c in checks) and rep.meta["config"]["suite"]["identity_trials"] >= 10
    vals = " ".join(f"{c.name}={c.value:.1e}" for c in checks)
    assert record(5, ok, vals)


def test_criterion_06_oracle(cache):
    rep, t = suite(cache, "oracle")
    c = rep.check("oracle_agreement")
    ok = c.passed and rep.check("oracle_converged").passed
    assert record(6, ok, f"max_rel_err={c.value:.2e} over {c.detail} runtime={t:.0f}s")


def test_criterion_07_dilation(cache):
    rep, _ = suite(cache, "estimate")
    c = rep.check("dilation")
    assert record(7, c.passed, f"max ratio_hom spread={c.value:.1e} "
                  f"(sharpness slope {rep.aggregate['dilation']['sharpness_min_slope']:.2f}, info)")


def test_criterion_08_sweep(cache):
    rep, t = suite(cache, "estimate")
    names = ["ratios_finite", "trials_per_cell"] + [c.name for c in rep.checks
                                                   if c.name.startswith("refinement[")]
    worst = max(rep.check(n).value for n in names if n.startswith("refinement["))
    ok = all(rep.check(n).passed for n in names) and t < 7200.0
    done = int(rep.check("trials_per_cell").value)
    assert record(8, ok, f"trials/cell={done} finite={rep.check('ratios_finite').passed} "
                  f"worst refinement delta={worst:.3f} runtime={t / 60:.0f}min")


def test_criterion_09_region3(cache):
    rep, _ = suite(cache, "region3")
    slopes = rep.aggregate["slopes"]
    ok = rep.passed
    s = " ".join(f"gamma={g}:{v:+.2f}" for g, v in slopes.items())
    assert record(9, ok, f"slopes {s} (threshold 0.1, {rep.aggregate['n_points']} points)")


def test_criterion_10_schur(cache):
    rep, _ = suite(cache, "schur")
    ratios = [v["ratio"] for v in rep.aggregate.values()]
    assert record(10, rep.passed, f"sigma/bound max={max(ratios):.3f} over {len(ratios)} kernels")


def _cli(out, threads, *args):
    env = dict(os.environ, NUMBA_NUM_THREADS=str(threads), GAINTERM_SUITE_MASS_METHOD="sphere")
    cmd = [sys.executable, "-m", "gainterm.cli", "--out", str(out), "verify", *args,
           "--format", "json,csv,md"]
    return subprocess.run(cmd, env=env, capture_output=True, text=True).returncode


def test_criterion_11_determinism(tmp_path):
    runs = (("partition",), ("schur",), ("identity", "--trials", "2"), ("estimate", "--trials", "1"))
    dirs = {}
    for threads in (1, 4):
        d = tmp_path / f"t{threads}"
        for args in runs:
            assert _cli(d, threads, *args) in (0, 1)
        dirs[threads] = d
    files = sorted(f for f in os.listdir(dirs[1]) if not f.endswith(".timing.json"))
    match, mismatch, errors = filecmp.cmpfiles(dirs[1], dirs[4], files, shallow=False)
    ok = len(files) == 3 * len(runs) and not mismatch and not errors
    assert record(11, ok, f"{len(match)}/{len(files)} report files byte-identical "
                  f"(NUMBA_NUM_THREADS 1 vs 4)")
