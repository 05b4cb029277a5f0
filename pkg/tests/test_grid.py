import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gainterm.analytic import AnalyticFn
from gainterm.errors import DomainError, MeanZeroError, TruncationError
from gainterm.grid import (GridFunction, NormSpec, VelocityGrid, apply_dpow, dft, norm, read_gf,
                           sample_on_grid, write_gf)

GRID = VelocityGrid(32, 8.0)


def test_grid_geometry():
    g = VelocityGrid(16, 8.0)
    assert g.h == 1.0 and g.dxi == pytest.approx(math.pi / 8)
    assert g.points().shape == (16, 16, 16, 3)
    assert g.axis()[g.n // 2] == 0.0
    with pytest.raises(DomainError):
        VelocityGrid(7, 1.0)


def test_dft_of_gaussian_is_gaussian():
    f = sample_on_grid(AnalyticFn.gaussian(width=1.0), GRID)
    F = dft(f)
    k = GRID.freq_abs()
    exact = (2 * math.pi) ** 1.5 * np.exp(-0.5 * k ** 2)
    # away from the Nyquist shell, where the first alias e^{-2 pi^2} sits
    inner = k < math.pi
    assert np.abs(F.values - exact)[inner].max() < 1e-10
    assert np.abs(F.values - exact).max() < 1e-7


@given(st.floats(0.6, 1.0), st.tuples(*[st.floats(-0.5, 0.5)] * 3))
def test_dft_roundtrip_and_parseval(w, c):
    f = sample_on_grid(AnalyticFn.gaussian(c, w), GRID)
    F = dft(f)
    assert np.allclose(dft(F, "inverse").values, f.values, atol=1e-12)
    l2 = norm(f, NormSpec.lebesgue(2))
    assert norm(f, NormSpec.hom(0.0)) == pytest.approx(l2, rel=1e-10)


def test_hom_norm_matches_closed_form():
    # |grad G|_2^2 = (3/2) pi^(3/2) for G = e^{-|v|^2/2}
    f = sample_on_grid(AnalyticFn.gaussian(), VelocityGrid(64, 8.0))
    assert norm(f, NormSpec.hom(1.0)) == pytest.approx(math.sqrt(1.5 * math.pi ** 1.5), rel=1e-8)
    assert norm(f, NormSpec.inhom(1.0)) ** 2 == pytest.approx(
        norm(f, NormSpec.lebesgue(2)) ** 2 + norm(f, NormSpec.hom(1.0)) ** 2, rel=1e-10)


@given(st.floats(0.25, 2.0))
def test_hom_norm_scaling(lam):
    # |f(lam .)|_{H-dot^a} = lam^(a - 3/2) |f|_{H-dot^a}, a = 1/2
    g = VelocityGrid(64, 16.0)
    f = AnalyticFn.gaussian(width=0.8)
    a = norm(sample_on_grid(f.dilate(lam), g.scaled(1 / lam)), NormSpec.hom(0.5))
    b = norm(sample_on_grid(f, g), NormSpec.hom(0.5))
    assert a == pytest.approx(lam ** (0.5 - 1.5) * b, rel=1e-10)


def test_negative_order_needs_mean_zero():
    f = sample_on_grid(AnalyticFn.gaussian(), GRID)
    with pytest.raises(MeanZeroError):
        norm(f, NormSpec.hom(-1.0))
    with pytest.raises(MeanZeroError):
        apply_dpow(f, -0.5)
    h = sample_on_grid(AnalyticFn.gaussian(width=1.0) - AnalyticFn.gaussian(width=1.0), GRID)
    assert norm(h, NormSpec.hom(-1.0)) == 0.0


def test_dpow_group_law():
    f = sample_on_grid(AnalyticFn.gaussian(width=0.9).modulate((0.5, 0, 0)), GRID)
    a = apply_dpow(apply_dpow(f, 0.5), 0.5)
    b = apply_dpow(f, 1.0)
    assert np.allclose(a.values, b.values, atol=1e-10)


def test_lebesgue_weighted():
    f = sample_on_grid(AnalyticFn.gaussian(), GRID)
    assert norm(f, NormSpec.lebesgue(1)) == pytest.approx((2 * math.pi) ** 1.5, rel=1e-10)
    assert norm(f, NormSpec.lebesgue(math.inf)) == pytest.approx(1.0)
    assert norm(f, NormSpec.lebesgue(1, 2.0)) > norm(f, NormSpec.lebesgue(1))


def test_truncation_guard():
    with pytest.raises(TruncationError):
        sample_on_grid(AnalyticFn.gaussian(width=3.0), VelocityGrid(16, 8.0))


def test_gfv1_roundtrip(tmp_path):
    f = sample_on_grid(AnalyticFn.gaussian().modulate((0, 1, 0)), VelocityGrid(8, 8.0), mode="ignore")
    p = tmp_path / "f.gf"
    write_gf(f, p, comment="config_hash=abc seed=1")
    g = read_gf(p)
    assert g.grid == f.grid and np.array_equal(g.values, f.values)
    assert p.read_text().splitlines()[1].startswith("# config_hash=abc")


def test_gridfunction_rejects_nonfinite():
    with pytest.raises(DomainError):
        GridFunction(VelocityGrid(8, 1.0), np.full(512, np.nan))


@given(st.floats(0.5, 2.0), st.sampled_from([1.0, 2.0, 4.0 / 3.0]))
def test_lebesgue_dilation_law(lam, p):
    g = VelocityGrid(64, 8.0)
    f = AnalyticFn.gaussian(width=0.9)
    a = norm(sample_on_grid(f.dilate(lam), g.scaled(1 / lam)), NormSpec.lebesgue(p))
    b = norm(sample_on_grid(f, g), NormSpec.lebesgue(p))
    assert a == pytest.approx(lam ** (-3 / p) * b, rel=1e-10)
