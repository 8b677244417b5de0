import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from favard.cantor import cantor_1d, cantor_2d
from favard.estimate import QuadratureSpec
from favard.intervals import from_raw, measure
from favard.linproj import favard_length, intercept_shadow, shadow, shadow_measures


@pytest.mark.parametrize("n", range(0, 6))
def test_axis_shadow_is_cantor_set(n):
    s = shadow(cantor_2d(n), 0.0)
    expected = from_raw([(float(iv.lo), float(iv.hi)) for iv in cantor_1d(n)])
    assert s == expected
    assert measure(s) == pytest.approx(2.0**-n, abs=1e-15)


def test_vertical_shadow_k1():
    s = shadow(cantor_2d(1), math.pi / 2)
    assert len(s) == 2
    assert np.allclose(s.lo, [0, 0.75], atol=1e-15) and np.allclose(s.hi, [0.25, 1], atol=1e-15)


def test_diagonal_shadow_matches_raster():
    gen = cantor_2d(2)
    theta = math.pi / 4
    c, s = math.cos(theta), math.sin(theta)
    pitch = 1e-3
    u = (np.arange(400) + 0.5) / 400 * gen.side
    occupied = set()
    for q in gen.squares:
        xs = float(q.x0) + u
        ys = float(q.y0) + u
        proj = (xs[:, None] * c + ys[None, :] * s).ravel()
        occupied.update(np.floor(proj / pitch).astype(int).tolist())
    raster = len(occupied) * pitch
    exact = shadow(gen, theta)
    # Each component end can be off by at most one partially covered bin.
    assert measure(exact) == pytest.approx(raster, abs=2 * pitch * len(exact))


def test_intercept_shadow_k1():
    s = intercept_shadow(cantor_2d(1), 0.5)
    assert s.intervals == [(-0.5, 1.0)]


@pytest.mark.parametrize("n", range(0, 7))
def test_intercept_shadow_slope_half_is_exactly_three_halves(n):
    assert measure(intercept_shadow(cantor_2d(n), 0.5)) == 1.5


def test_intercept_shadow_slope_zero():
    s = intercept_shadow(cantor_2d(1), 0.0)
    assert s.intervals == [(0.0, 0.25), (0.75, 1.0)]
    assert measure(s) == 0.5


@settings(max_examples=50)
@given(st.floats(0, math.pi), st.integers(1, 4))
def test_shadow_symmetries(theta, n):
    gen = cantor_2d(n)
    m = shadow_measures(gen, np.array([theta, theta + math.pi / 2, math.pi / 2 - theta]))
    assert m[1] == pytest.approx(m[0], abs=1e-12)
    assert m[2] == pytest.approx(m[0], abs=1e-12)


@settings(max_examples=50)
@given(st.floats(0, math.pi), st.integers(0, 5))
def test_shadow_monotone_in_n_and_bounded(theta, n):
    a = shadow_measures(cantor_2d(n), np.array([theta]))[0]
    b = shadow_measures(cantor_2d(n + 1), np.array([theta]))[0]
    assert b <= a + 1e-12
    assert a <= math.sqrt(2) + 1e-12


@settings(max_examples=50)
@given(st.floats(-4, 4), st.integers(0, 4))
def test_intercept_and_shadow_agree(slope, n):
    gen = cantor_2d(n)
    theta = math.atan2(1.0, -slope)
    lhs = measure(intercept_shadow(gen, slope)) * math.cos(math.atan(slope))
    assert lhs == pytest.approx(measure(shadow(gen, theta)), abs=1e-9)


def test_shadow_sweep_matches_interval_set():
    gen = cantor_2d(3)
    thetas = np.linspace(0, math.pi, 37)
    sweep = shadow_measures(gen, thetas)
    direct = [measure(shadow(gen, t)) for t in thetas]
    assert np.allclose(sweep, direct, atol=1e-12)


def test_favard_length_unit_square():
    est = favard_length(cantor_2d(0))
    assert est.value == pytest.approx(4.0, abs=1e-6)
    assert est.method == "quadrature"
    assert "not divided by pi" in est.params["normalization"]


def test_favard_length_k1_stable_under_doubling():
    a = favard_length(cantor_2d(1), QuadratureSpec(2048)).value
    b = favard_length(cantor_2d(1), QuadratureSpec(4096)).value
    assert float(f"{a:.3g}") == float(f"{b:.3g}")


def test_favard_length_decreases():
    vals = [favard_length(cantor_2d(n), QuadratureSpec(512)).value for n in range(0, 9)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_explicit_range_integrates_as_given():
    est = favard_length(cantor_2d(0), QuadratureSpec(2048, range=(0.0, math.pi)))
    assert est.value == pytest.approx(4.0, abs=1e-6)
