import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gainterm.analytic import AnalyticFn, GrammarError, parse

coord = st.floats(-2.0, 2.0)
vec3 = st.tuples(coord, coord, coord)
width = st.floats(0.3, 2.0)


def test_gaussian_mass_matches_quadrature():
    f = AnalyticFn.gaussian((0.3, -0.2, 0.1), 0.7, 2.0)
    x = np.linspace(-6, 6, 121)
    h = x[1] - x[0]
    pts = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)
    assert abs(np.sum(f(pts)) * h ** 3 - f.l1_mass()) < 1e-8
    assert f.l1_mass() == pytest.approx(2.0 * (2 * math.pi) ** 1.5 * 0.7 ** 3)


def test_bump_is_compactly_supported():
    b = AnalyticFn.bump((1.0, 0.0, 0.0), 0.5)
    assert b(np.array([1.0, 0.0, 0.0])) == pytest.approx(1.0)
    assert b(np.array([1.6, 0.0, 0.0])) == 0
    assert b.effective_radius() == 1.5


@given(vec3, width, vec3)
def test_translate_is_shift(c, w, m):
    f = AnalyticFn.gaussian(c, w)
    v = np.array([0.3, 0.1, -0.4])
    assert f.translate(m)(v) == pytest.approx(f(v + np.array(m)), abs=1e-12)


@given(vec3, width, st.floats(0.25, 4.0))
def test_dilate_is_rescaling(c, w, lam):
    f = AnalyticFn.gaussian(c, w, 1.5)
    v = np.array([0.2, -0.7, 0.5])
    assert f.dilate(lam)(v) == pytest.approx(f(lam * v), abs=1e-12)
    assert f.dilate(lam).l1_mass() == pytest.approx(f.l1_mass() / lam ** 3)


@given(vec3, vec3)
def test_modulate_multiplies_by_plane_wave(c, k):
    f = AnalyticFn.gaussian(c, 1.0)
    v = np.array([0.4, 0.2, -0.1])
    assert f.modulate(k)(v) == pytest.approx(np.exp(1j * np.dot(k, v)) * f(v), abs=1e-12)


def test_modulated_mass_is_fourier_transform():
    k = (0.5, 0.0, -0.3)
    f = AnalyticFn.gaussian((0.0, 0.0, 0.0), 1.0).modulate(k)
    assert f.l1_mass() == pytest.approx((2 * math.pi) ** 1.5 * math.exp(-0.5 * 0.34))
    assert not f.is_real


def test_algebra_and_queries():
    f = AnalyticFn.gaussian() + 2.0 * AnalyticFn.bump()
    v = np.zeros(3)
    assert f(v) == pytest.approx(1.0 + 2.0)
    assert (f - f)(v) == 0
    assert AnalyticFn.zero().is_zero
    assert not f.gaussian_type
    assert AnalyticFn.gaussian().gaussian_type


@pytest.mark.parametrize("text", [
    "gaussian(c=0,0,0;w=1;a=1)+bump(c=1,0,0;r=2)",
    "dilate(2; gaussian(w=0.5))",
    "translate(1,0,0; gaussian)",
    "modulate(0,0,1; gaussian(c=1,1,1))",
    "2.5*gaussian-const(a=1)",
    "zero()",
])
def test_grammar_roundtrip(text):
    f = parse(text)
    g = parse(str(f))
    pts = np.random.default_rng(0).normal(size=(16, 3))
    assert np.allclose(f(pts), g(pts))


def test_grammar_matches_constructors():
    f = parse("translate(1,0,0; dilate(2; gaussian(c=0,0,1;w=0.5;a=3)))")
    g = AnalyticFn.gaussian((0, 0, 1), 0.5, 3).dilate(2).translate((1, 0, 0))
    pts = np.random.default_rng(1).normal(size=(8, 3))
    assert np.allclose(f(pts), g(pts))


@pytest.mark.parametrize("bad", ["gauss(", "gaussian(w=-1)", "gaussian(c=1,2)", "bump(r=1", "", "foo"])
def test_grammar_rejects(bad):
    with pytest.raises((GrammarError, ValueError)):
        parse(bad)
