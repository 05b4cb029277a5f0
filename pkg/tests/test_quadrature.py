import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gainterm.quadrature import SphereQuadrature, gauss_legendre


@given(st.integers(0, 15))
def test_gauss_legendre_exact_on_polynomials(k):
    x, w = gauss_legendre(-1.0, 2.0, 8)
    assert np.sum(w * x ** k) == pytest.approx((2.0 ** (k + 1) - (-1.0) ** (k + 1)) / (k + 1))


def test_composite_panels_converge():
    x, w = gauss_legendre(0.0, 200.0, 600)
    assert np.sum(w * np.cos(x)) == pytest.approx(math.sin(200.0), abs=1e-12)


@pytest.mark.parametrize("variable", ["mu", "theta"])
def test_hemisphere_area_and_moment(variable):
    q = SphereQuadrature(16, 16, variable)
    c, sx, sy, w = q.flat()
    assert np.sum(w) == pytest.approx(2 * math.pi)
    assert np.sum(w * c) == pytest.approx(math.pi)
    assert np.allclose(c ** 2 + sx ** 2 + sy ** 2, 1.0)
    assert q.integrate(lambda th, ph: np.cos(th) ** 2) == pytest.approx(2 * math.pi / 3)


def test_rejects_bad_counts():
    with pytest.raises(ValueError):
        SphereQuadrature(0, 4)
