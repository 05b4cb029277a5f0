"""Small runs of each suite; the full-size runs live in test_acceptance.py."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gainterm.config import Config
from gainterm.verify import SUITES, run_suite
from gainterm.verify.common import TrialSpec, lebesgue_R, mean_zero, random_mixture
from gainterm.verify.report import to_json
from gainterm.verify.symbolic import stationary_decay_suite
from gainterm.verify.schur import _log_nodes, kernel_choice, power_iteration, schur_numbers


def test_registry():
    assert set(SUITES) == {"partition", "geometry", "stationary", "identity", "oracle",
                           "estimate", "region3", "schur"}
    with pytest.raises(KeyError):
        run_suite("nope", Config())


def test_partition_suite_passes():
    rep = run_suite("partition", Config())
    assert rep.passed, rep.failures


def test_geometry_suite_small():
    rep = run_suite("geometry", Config(), 20)
    assert rep.failures == ["hessian_minus_literal"]
    assert rep.check("hessian_minus_literal").value == pytest.approx(4.0, abs=1e-5)
    assert rep.check("hessian_minus_corrected").passed


def test_region3_suite_small():
    rep = run_suite("region3", Config(), 60)
    assert rep.check("slope[gamma=0]").passed
    assert len(rep.trials) == 120


def test_identity_suite_one_trial():
    cfg = Config().replace(suite={"mass_method": "sphere"})
    rep = run_suite("identity", cfg, 1)
    assert rep.passed, rep.failures


def test_oracle_suite_two_points():
    rep = run_suite("oracle", Config(), 2)
    assert rep.passed, rep.failures
    assert rep.aggregate["maxwellian_gamma0_rel_err"] < 1e-6


def test_schur_matches_svd():
    ch = kernel_choice("regionC1")
    num = schur_numbers(ch, 60)
    assert num["converged"] and num["sigma"] <= num["bound"]
    rr, wr = _log_nodes(*ch.x_range, 60)
    ss, ws = _log_nodes(*ch.xi_range, 60)
    A = np.sqrt(wr)[:, None] * ch.kernel(rr[:, None], ss[None, :]) * np.sqrt(ws)[None, :]
    assert num["sigma"] == pytest.approx(np.linalg.svd(A, compute_uv=False)[0], rel=1e-10)


@given(st.integers(2, 12), st.integers(0, 1000))
def test_schur_bound_holds_for_random_nonnegative_kernels(m, seed):
    rng = np.random.default_rng(seed)
    K = rng.uniform(0, 1, (m, m))
    p, q = rng.uniform(0.5, 2, m), rng.uniform(0.5, 2, m)
    omega = np.max(K @ q / p)
    beta = np.max(K.T @ p / q)
    sigma, _, conv = power_iteration(K, seed)
    assert conv and sigma <= math.sqrt(omega * beta) * (1 + 1e-9)


def test_schur_suite_deterministic():
    a = to_json(run_suite("schur", Config()))
    b = to_json(run_suite("schur", Config()))
    assert a == b


def test_trial_spec_validation():
    f = g = h = None
    TrialSpec(f, g, h, 4 / 3, 4 / 3, 0.5, None, (16, 24), 0)
    with pytest.raises(ValueError):
        TrialSpec(f, g, h, 1.0, 1.0, 0.5, None, (16, 24), 0)
    assert lebesgue_R(0.0) == 2.0


@given(st.integers(0, 2 ** 32 - 1))
def test_random_families(seed):
    rng = np.random.default_rng(seed)
    f = random_mixture(rng)
    assert f.gaussian_type and 1 <= len(f.atoms) <= 3
    h = mean_zero(rng)
    assert abs(h.l1_mass()) < 1e-12 * sum(abs(a.amp) for a in h.atoms) * 100


def test_stationary_suite_records_published_mismatch():
    rep = stationary_decay_suite(Config(), gammas=(0.0,), theta0_list=(math.pi / 2,), lambda_list=(100.0, 1000.0))
    assert rep.check("quadrature_vs_closed_form").passed
    assert rep.check("colinear_closed_form").passed
    assert rep.aggregate["max_rel_err"] < 1e-9
    assert rep.aggregate["max_rel_err_published"] > 1.0
