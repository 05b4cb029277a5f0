import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gainterm.errors import DomainError
from gainterm.partitions import (Coarse, Zone, angular_partition, cone_bounds, dominant_cone,
                                 psi, radial_partition, region_classify, rho, s_bar, s_cut,
                                 set_ramp, zeta_index)


@pytest.mark.parametrize("ramp", ["exp", "exp2"])
@given(st.floats(-20.0, 20.0))
def test_dyadic_telescoping(ramp, logr):
    set_ramp(ramp)
    r = math.exp(logr)
    total = sum(rho(2.0 ** -k * r) for k in range(-64, 65))
    assert abs(total - 1.0) < 1e-10


@given(st.floats(0.0, 100.0))
def test_cutoff_complement(r):
    assert s_cut(r) + s_bar(r) == 1.0
    assert 0.0 <= s_cut(r) <= 1.0


def test_cutoff_plateaus():
    assert np.all(s_cut(np.linspace(0, 8, 50)) == 1.0)
    assert np.all(s_cut(np.linspace(16, 1e3, 50)) == 0.0)
    assert s_cut(0.0) == 1.0


def test_psi_monotone_and_rho_support():
    r = np.linspace(0, 40, 4001)
    assert np.all(np.diff(psi(r)) <= 0)
    assert np.all(rho(np.linspace(0, 4, 20)) == 0)
    assert np.all(rho(np.linspace(16, 100, 20)) == 0)
    assert np.all(rho(np.linspace(4.5, 15.5, 20)) > 0)


def test_radial_partition_kinds():
    assert radial_partition("rho", 1, 20.0) == pytest.approx(float(rho(10.0)))
    assert radial_partition("s_bar", 0, 20.0) == 1.0
    with pytest.raises(DomainError):
        radial_partition("rho", 0, -1.0)
    with pytest.raises(ValueError):
        radial_partition("nope", 0, 1.0)


@given(st.floats(1e-3, math.pi - 1e-3))
def test_angular_unity(t):
    total = sum(float(zeta_index(z, t)) for z in range(-40, 41))
    assert abs(total - 1.0) < 1e-10


@given(st.integers(-8, 8).filter(bool))
def test_cone_support(z):
    lo, hi = cone_bounds(z)
    t = np.linspace(1e-4, math.pi - 1e-4, 4000)
    inside = (t > lo) & (t < hi)
    assert np.all(zeta_index(z, t[~inside]) == 0)


@given(st.floats(0.01, math.pi - 0.01))
def test_dominant_cone_has_largest_weight(t):
    z = dominant_cone(t)
    best = max(float(zeta_index(k, t)) for k in range(-12, 13))
    assert float(zeta_index(z, t)) == best


def test_angular_partition_uses_angle():
    x, xi = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    assert angular_partition(0, x, xi) == 1.0


def test_region_examples():
    assert region_classify([100, 0, 0], [0, 100, 0]).coarse is Coarse.A
    assert region_classify([100, 0, 0], [0, 100, 0]).zone is Zone.I
    assert region_classify([1, 0, 0], [0, 1, 0]).coarse is Coarse.C2
    assert region_classify([100, 0, 0], [0, 1, 0]).coarse is Coarse.B1
    lab = region_classify([10, 0, 0], [10, 0, 0])
    assert lab.cone is None and lab.zone is None


@given(st.floats(-6, 12), st.floats(-6, 12), st.floats(1e-3, math.pi - 1e-3))
def test_region_cover(lx, lxi, t):
    nx, nxi = math.exp(lx), math.exp(lxi)
    x = np.array([0, 0, nx])
    xi = nxi * np.array([math.sin(t), 0, math.cos(t)])
    lab = region_classify(x, xi)
    assert lab.coarse in Coarse
    assert (lab.zone is not None) == (lab.coarse is Coarse.A)
