import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tori.errors import ConvergenceFailure, InvalidInput
from tori.lattice import Lattice
from tori.weierstrass import (
    CubicCurve,
    cubic_of_lattice,
    eisenstein,
    row_sum,
    wp,
    zeta_even,
)

SQUARE = Lattice(1, 1j)
HEX = Lattice(1, cmath.exp(1j * math.pi / 3))


def direct_points(lattice, n=300):
    m, k = np.meshgrid(np.arange(-n, n + 1), np.arange(-n, n + 1))
    w = (m * lattice.w1 + k * lattice.w2).ravel()
    return w[w != 0]


def direct_eisenstein(lattice, k, n=300):
    return complex(np.sum(direct_points(lattice, n) ** (-2 * k)))


def direct_wp(z, lattice, n=300):
    w = direct_points(lattice, n)
    return complex(1 / z**2 + np.sum(1 / (z - w) ** 2 - 1 / w**2))


def test_zeta_even():
    assert zeta_even(2) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert zeta_even(4) == pytest.approx(math.pi**4 / 90, rel=1e-15)
    with pytest.raises(InvalidInput):
        zeta_even(3)


@pytest.mark.parametrize("s", [2, 3, 4, 6])
def test_row_sum_matches_direct(s):
    z = 0.3 + 0.2j
    direct = sum((z + m) ** (-s) for m in range(-200000, 200001))
    assert abs(row_sum(z, s) - direct) < 1e-4 * abs(direct) + 1e-9


def test_symmetric_vanishing():
    assert abs(eisenstein(SQUARE, 3, 64)) < 1e-10
    assert abs(eisenstein(HEX, 2, 64)) < 1e-10
    g4 = eisenstein(SQUARE, 2)
    assert g4.real > 0 and abs(g4.imag) < 1e-12
    assert abs(eisenstein(SQUARE, 2, 32) - eisenstein(SQUARE, 2, 64)) < 1e-8 * abs(g4)


def test_cubic_examples():
    assert abs(cubic_of_lattice(SQUARE).b) < 1e-9
    assert abs(cubic_of_lattice(HEX).a) < 1e-9
    assert not cubic_of_lattice(SQUARE).degenerate
    # x^3 - 3x + 2 = (x - 1)^2 (x + 2)
    assert CubicCurve(-3, 2).degenerate


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.7j, -0.4 + 0.95j, cmath.exp(2j * math.pi / 3)])
@pytest.mark.parametrize("k", [2, 3])
def test_eisenstein_matches_direct_sum(tau, k):
    lat = Lattice(1, tau)
    fast, slow = eisenstein(lat, k), direct_eisenstein(lat, k)
    scale = max(abs(fast), 1.0)
    assert abs(fast - slow) < 1e-5 * scale


@pytest.mark.parametrize("z", [0.3 + 0.2j, 0.5 + 0.5j, 0.1 - 0.7j])
def test_wp_matches_direct_sum(z):
    lat = Lattice(1, 0.2 + 1.1j)
    p, _ = wp(z, lat)
    assert abs(p - direct_wp(z, lat)) < 1e-3 * max(1.0, abs(p))


def test_wp_derivative_by_difference():
    lat = Lattice(1, 0.2 + 1.1j)
    z, h = 0.31 + 0.27j, 1e-5
    p_plus, _ = wp(z + h, lat)
    p_minus, _ = wp(z - h, lat)
    _, half_dp = wp(z, lat)
    assert (p_plus - p_minus) / (2 * h) == pytest.approx(2 * half_dp, rel=1e-6)


def test_wp_pole_and_periodicity():
    lat = Lattice(1, 0.2 + 1.1j)
    with pytest.raises(InvalidInput):
        wp(lat.w2, lat)
    z = 0.37 + 0.21j
    assert wp(z + lat.w1, lat)[0] == pytest.approx(wp(z, lat)[0], rel=1e-10)
    assert wp(z + lat.w2, lat)[0] == pytest.approx(wp(z, lat)[0], rel=1e-10)


def test_box_validation_and_certificate():
    with pytest.raises(InvalidInput):
        eisenstein(SQUARE, 1)
    with pytest.raises(InvalidInput):
        eisenstein(SQUARE, 2, box=4)
    # a very thin lattice needs many rows; box 8 cannot certify it
    with pytest.raises(ConvergenceFailure):
        eisenstein(Lattice(1, 0.3 + 0.02j), 2, box=8)


@settings(max_examples=25, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(0.9, 2.0), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_on_curve(x, y, u, v):
    lat = Lattice(1, complex(x, y))
    z = u + v * lat.w2
    curve = cubic_of_lattice(lat)
    p, dp = wp(z, lat)
    assert abs(curve.residual(p, dp)) < 1e-6 * max(1.0, abs(p) ** 3)


@given(st.floats(0.3, 3.0), st.floats(0, 2 * math.pi), st.sampled_from([2, 3]))
@settings(max_examples=20, deadline=None)
def test_homogeneity(r, phi, k):
    alpha = cmath.rect(r, phi)
    lat = Lattice(1, 0.1 + 1.2j)
    g, ga = eisenstein(lat, k), eisenstein(lat.scaled(alpha), k)
    assert abs(ga - alpha ** (-2 * k) * g) <= 1e-8 * abs(ga)
