import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gainterm.analytic import AnalyticFn
from gainterm.collision import (KernelSpec, QuadConfig, conjugated_radon, hemisphere_average,
                                loss_eval, points_csv, qplus_eval, qplus_multi, qplus_oracle,
                                radon_eval, sphere_average, weak_form_rhs)
from gainterm.errors import DomainError, TruncationError
from gainterm.grid import VelocityGrid
from gainterm.quadrature import SphereQuadrature

GRID = VelocityGrid(16, 8.0)
QUAD = QuadConfig(SphereQuadrature(16, 16), GRID, "sphere")
G1 = AnalyticFn.gaussian((0.2, 0, -0.1), 0.9)
G2 = AnalyticFn.gaussian((-0.3, 0.1, 0), 0.8, 1.5)


def test_mass_identity_gamma0():
    q = qplus_eval(G1, G2, GRID, KernelSpec(0.0), QUAD)
    total = np.sum(q.values) * GRID.cell
    assert abs(total - math.pi * G1.l1_mass() * G2.l1_mass()) / abs(total) < 1e-4


def test_direct_and_sphere_methods_agree():
    pts = np.array([[0.0, 0.0, 0.0], [1.0, -0.5, 0.3]])
    a = qplus_multi(G1, G2, pts, [KernelSpec(1.0)], QuadConfig(SphereQuadrature(16, 16), GRID, "direct"))[0]
    b = qplus_multi(G1, G2, pts, [KernelSpec(1.0)], QUAD)[0]
    assert np.allclose(a, b, rtol=1e-6)


def test_maxwellian_gain_gamma0():
    M = AnalyticFn.gaussian()
    v = np.array([[0.7, -0.2, 0.4]])
    val = qplus_eval(M, M, v, KernelSpec(0.0), QUAD)[0]
    exact = math.pi * (2 * math.pi) ** 1.5 * math.exp(-0.5 * float(v[0] @ v[0]))
    assert abs(val - exact) / exact < 1e-6


def test_split_is_exact():
    pts = np.array([[0.5, 0.5, 0.5]])
    full, small, large = qplus_multi(G1, G2, pts, [KernelSpec(1.0, c) for c in ("full", "small", "large")],
                                     QUAD)
    assert abs(full - small - large)[0] < 1e-12 * abs(full[0])


def test_oracle_agrees_with_lattice():
    v = np.array([0.4, -0.3, 0.2])
    o = qplus_oracle(G1, G2, v, KernelSpec(1.0))
    lat = qplus_eval(G1, G2, v[None], KernelSpec(1.0), QuadConfig(SphereQuadrature(16, 16),
                                                                  VelocityGrid(32, 8.0), "sphere"))[0]
    assert not o.inconclusive
    assert abs(lat - o.value) / abs(o.value) < 1e-3


def test_weak_form_matches_pairing():
    h = AnalyticFn.gaussian((0.5, 0, 0), 1.2)
    q = qplus_eval(G1, G2, GRID, KernelSpec(0.5), QUAD)
    lhs = np.sum(q.values * np.conj(h(GRID.points()))) * GRID.cell
    rhs = weak_form_rhs(G1, G2, h, KernelSpec(0.5), QUAD)
    assert abs(lhs - rhs) / abs(rhs) < 1e-3


def test_loss_term_of_maxwellian():
    v = np.zeros(3)
    val = loss_eval(AnalyticFn.gaussian(), v, KernelSpec(0.0), QUAD)
    assert val == pytest.approx(math.pi * (2 * math.pi) ** 1.5, rel=1e-7)


@given(st.tuples(*[st.floats(-1, 1)] * 3), st.floats(0.1, 3.0))
def test_sphere_average_closed_form_matches_quadrature(c, r):
    h = AnalyticFn.gaussian((0.3, 0, 0.1), 0.8).modulate((0.2, 0.0, -0.4))
    c = np.array(c)
    q = SphereQuadrature(48, 48)
    ct, sx, sy, w = q.flat()
    full = np.concatenate([np.stack([sx, sy, ct], 1), np.stack([sx, sy, -ct], 1)])
    ww = np.concatenate([w, w])
    ref = np.sum(ww * h(c + r * full))
    assert sphere_average(h, c, r) == pytest.approx(ref, abs=1e-10)


def test_hemisphere_identity():
    # int_{S^2_+} cos h(v') dOmega = (1/4) int_{S^2} h(c + r s) ds
    h = AnalyticFn.gaussian((0.2, -0.4, 0.1), 0.9)
    v, vs = np.array([0.5, 0.3, -0.2]), np.array([-0.4, 0.1, 0.6])
    a = hemisphere_average(h, v, vs, SphereQuadrature(48, 48))
    b = 0.25 * sphere_average(h, 0.5 * (v + vs), 0.5 * np.linalg.norm(v - vs))
    assert a == pytest.approx(b, rel=1e-10)


def test_conjugated_radon_symmetric_and_bump_fallback():
    h = AnalyticFn.bump((0.2, 0, 0), 1.5)
    v, vs = np.array([0.5, 0.3, -0.2]), np.array([-0.4, 0.1, 0.6])
    a = conjugated_radon(h, v, vs, 1.0, method="auto")
    b = conjugated_radon(h, vs, v, 1.0, method="auto")
    assert a == pytest.approx(b, rel=1e-10)
    with pytest.raises(DomainError):
        radon_eval(h, np.zeros(3), 0.0)


def test_guard_and_domain_errors():
    wide = AnalyticFn.gaussian(width=3.0)
    with pytest.raises(TruncationError):
        qplus_eval(wide, G2, GRID, KernelSpec(0.0), QUAD)
    with pytest.raises(DomainError):
        KernelSpec(1.5)
    with pytest.raises(DomainError):
        qplus_eval(G1, G2, np.zeros((1, 3)), KernelSpec(0.0), QuadConfig())
    z = qplus_eval(AnalyticFn.zero(), G2, GRID, KernelSpec(0.0), QUAD)
    assert not np.any(z.values)


def test_points_csv_format():
    text = points_csv(np.array([[1.0, 0, 0]]), np.array([2.5 + 0j]), "seed=1")
    assert text.splitlines() == ["# seed=1", "vx,vy,vz,value", "1.0,0.0,0.0,2.5"]


@given(st.floats(-2.0, 2.0))
def test_bilinearity(alpha):
    pts = np.array([[0.1, 0.2, -0.3], [1.0, 0.0, 0.5]])
    k = [KernelSpec(0.5)]
    lhs = qplus_multi(alpha * G1 + G2, G2, pts, k, QUAD)[0]
    rhs = alpha * qplus_multi(G1, G2, pts, k, QUAD)[0] + qplus_multi(G2, G2, pts, k, QUAD)[0]
    assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(rhs).max())


@given(st.sampled_from([0.0, 0.5, 1.0]), st.sampled_from(["full", "small", "large"]))
def test_positivity(gamma, cutoff):
    q = qplus_eval(G1, G2, GRID, KernelSpec(gamma, cutoff), QUAD)
    assert q.values.real.min() >= -1e-12
