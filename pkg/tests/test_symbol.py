import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from gainterm.errors import PreconditionError, ResolutionError, ValidityError
from gainterm.symbol import (loglog_slope, node_floor, region3_scan, symbol_closed_form,
                             symbol_compare, symbol_direct, symbol_stationary)


def _pair(lam, th0):
    s = math.sqrt(lam)
    return np.array([0, 0, s]), s * np.array([math.sin(th0), 0, math.cos(th0)])


def test_colinear_closed_form():
    e = np.array([0.0, 0.0, 1.0])
    target = math.pi * (1 - cmath.exp(-1j)) / 1j
    assert abs(symbol_direct(e, e, 1.0).value - target) < 1e-8


@given(st.floats(0.5, 30.0), st.floats(0.1, math.pi - 0.1), st.sampled_from([0.0, 0.5, 1.0]))
def test_direct_matches_closed_form(lam, th0, g):
    x, xi = _pair(lam, th0)
    q = symbol_direct(x, xi, g).value
    c = symbol_closed_form(x, xi, g).value
    assert abs(q - c) <= 1e-9 * max(1.0, lam ** (g - 1))


def test_symbol_depends_only_on_product():
    # a(x, xi) = 2 pi L^(g-1) e^(-i x.xi/2) sin(L/2) is invariant under x -> t x, xi -> xi / t
    x, xi = np.array([0.3, 1.2, -0.4]), np.array([1.1, -0.2, 0.7])
    a = symbol_direct(x, xi, 0.5).value
    b = symbol_direct(2.0 * x, xi / 2.0, 0.5).value
    assert a == pytest.approx(b, abs=1e-12)


def test_resolution_error_for_coarse_rule():
    x, xi = _pair(1e4, math.pi / 2)
    with pytest.raises(ResolutionError) as exc:
        symbol_direct(x, xi, 0.0, quad=(16, 16))
    assert exc.value.required[0] >= node_floor(1e4, math.pi / 2)[0]


def test_stationary_validity_and_colinear():
    with pytest.raises(ValidityError):
        symbol_stationary(*_pair(10.0, math.pi / 2), 0.0)
    e = np.array([0, 0, 1.0])
    with pytest.raises(PreconditionError):
        symbol_stationary(100 * e, 100 * e, 0.0)


@pytest.mark.parametrize("th0", [math.pi / 3, math.pi / 2, 2.0])
@pytest.mark.parametrize("lam", [100.0, 1000.0])
def test_computed_stationary_phase_equals_closed_form(th0, lam):
    x, xi = _pair(lam, th0)
    st_ = symbol_stationary(x, xi, 1.0).value
    cf = symbol_closed_form(x, xi, 1.0).value
    assert abs(st_ - cf) < 1e-10 * max(1.0, abs(cf))


def test_published_coefficients_disagree():
    x, xi = _pair(400.0, math.pi / 2)
    pub = symbol_stationary(x, xi, 0.0, convention="published").value
    cf = symbol_closed_form(x, xi, 0.0).value
    # off by the factor -4 at theta0 = pi/2
    assert pub == pytest.approx(-0.25 * cf, rel=1e-10)


def test_compare_row():
    q, st_, rel = symbol_compare(np.array([0, 0, 20.0]), np.array([20.0, 0, 0]), 1.0)
    assert rel < 1e-10
    assert q.lam == pytest.approx(400.0)


def test_loglog_slope_recovers_power():
    xs = np.logspace(1, 4, 10)
    assert loglog_slope(xs, 3 * xs ** -1.0) == pytest.approx(-1.0)


def test_region3_scan_rows():
    rows = region3_scan(7, 20, 0.0)
    assert len(rows) == 20
    assert all(r["abs_norm"] >= 0 and r["lambda"] > 64 for r in rows)
    assert rows == region3_scan(7, 20, 0.0)
