import cmath

import mpmath
import numpy as np
import pytest

from conftest import SQUARE, HEXAGONAL
from modules import torus
from modules.torus import EllipticCurve
from modules.weierstrass import (
    INFINITY,
    branch_residual,
    get_lattice,
    invariants,
    reduce_modulus,
    weierstrass_p,
    weierstrass_p_prime,
)

SKEWED = EllipticCurve(2.3 + 0.4j)
CURVES = [SQUARE, HEXAGONAL, SKEWED]

def theta_oracle(z, curve):
    """p(z) for Z + Z*tau through Jacobi theta functions, at 30 digits"""
    with mpmath.workdps(30):
        tau = mpmath.mpc(curve.lattice_tau.real, curve.lattice_tau.imag)
        q = mpmath.exp(1j * mpmath.pi * tau)
        x = mpmath.pi * mpmath.mpc(z.real, z.imag)
        t2 = mpmath.jtheta(2, 0, q)
        t3 = mpmath.jtheta(3, 0, q)
        t4 = mpmath.jtheta(4, 0, q)
        value = (
            mpmath.pi ** 2 * t2 ** 2 * t3 ** 2 * mpmath.jtheta(4, x, q) ** 2 / mpmath.jtheta(1, x, q) ** 2
            - mpmath.pi ** 2 / 3 * (t2 ** 4 + t3 ** 4)
        )
        return complex(value)

def sample(rng, curve, low=0.05, high=0.95):
    return torus.from_coordinates(rng.uniform(low, high), rng.uniform(low, high), curve).z

@pytest.mark.parametrize("curve", CURVES)
def test_value_matches_theta_oracle(curve, rng):
    for _ in range(25):
        z = sample(rng, curve)
        expected = theta_oracle(z, curve)
        assert abs(weierstrass_p(z, curve) - expected) <= 1e-9 * max(1.0, abs(expected))

def test_square_lattice_branch_value():
    assert weierstrass_p(0.5, SQUARE) == pytest.approx(6.875185818020376, rel=1e-10)
    e1, e2, e3 = get_lattice(SQUARE).branch_values()
    assert e2 == pytest.approx(-e1, rel=1e-12)
    assert abs(e3) <= 1e-9

def test_pole_at_lattice_points():
    assert weierstrass_p(0, SQUARE) is INFINITY
    assert weierstrass_p(1 + 1j, SQUARE) is INFINITY

@pytest.mark.parametrize("curve", CURVES)
def test_even_and_periodic(curve, rng):
    omega1, omega2 = curve.periods()
    for _ in range(25):
        z = sample(rng, curve)
        value = weierstrass_p(z, curve)
        scale = max(1.0, abs(value))
        assert abs(weierstrass_p(-z, curve) - value) <= 1e-10 * scale
        assert abs(weierstrass_p(z + omega1, curve) - value) <= 1e-10 * scale
        assert abs(weierstrass_p(z - 2 * omega2, curve) - value) <= 1e-10 * scale

@pytest.mark.parametrize("curve", CURVES)
def test_derivative_vanishes_at_half_periods(curve):
    for half in get_lattice(curve).half_periods():
        assert abs(weierstrass_p_prime(half, curve)) <= 1e-8

@pytest.mark.parametrize("curve", CURVES)
def test_differential_equation(curve, rng):
    lattice = get_lattice(curve)
    g2, g3 = invariants(curve)
    zs = np.array([sample(rng, curve, 0.1, 0.9) for _ in range(500)])
    p = lattice.values(zs)
    dp = lattice.values(zs, derivative=True)
    residual = np.abs(dp ** 2 - (4 * p ** 3 - g2 * p - g3))
    scale = np.maximum(1.0, np.abs(p) ** 3)
    assert np.all(residual <= 1e-8 * scale)

@pytest.mark.parametrize("curve", CURVES)
def test_branch_values_are_roots_of_the_cubic(curve):
    g2, g3 = invariants(curve)
    assert branch_residual(curve) <= 1e-7 * max(1.0, abs(g2) ** 1.5, abs(g3))

@pytest.mark.parametrize("curve", CURVES)
def test_invert_round_trip(curve, rng):
    lattice = get_lattice(curve)
    for _ in range(40):
        w = complex(rng.uniform(-30, 30), rng.uniform(-30, 30))
        z = lattice.invert(w)
        assert abs(lattice.value(z.z) - w) <= 1e-8 * max(1.0, abs(w))

def test_invert_special_values():
    lattice = get_lattice(HEXAGONAL)
    assert torus.points_equal(lattice.invert(INFINITY), torus.from_coordinates(0, 0, HEXAGONAL))
    for half, e in zip(lattice.half_periods(), lattice.branch_values()):
        assert torus.points_equal(lattice.invert(e), torus.torus_reduce(half, HEXAGONAL))

def test_invert_large_values_near_the_pole():
    lattice = get_lattice(SQUARE)
    z = lattice.invert(1e6 + 0j)
    assert abs(lattice.value(z.z) - 1e6) <= 1e-6 * 1e6
    assert torus.torus_distance(z, torus.from_coordinates(0, 0, SQUARE)) < 0.01

def test_reduce_modulus():
    for tau in [0.3 + 0.2j, -4.7 + 0.05j, 2.3 + 0.4j, 1j]:
        reduced, (a, b, c, d) = reduce_modulus(tau)
        assert a * d - b * c == 1
        assert cmath.isclose((a * tau + b) / (c * tau + d), reduced, rel_tol=1e-9)
        assert abs(reduced.real) <= 0.5 + 1e-12
        assert abs(reduced) >= 1 - 1e-12
