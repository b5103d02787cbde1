import random

import pytest

from modules import surface
from modules import nslattice
from modules import torus
from modules.torus import EllipticCurve

SQUARE = EllipticCurve(1j)
HEXAGONAL = EllipticCurve(0.5 + 0.8660254037844386j)

def hopf_surface(multiple_fibres=(), tau=2.0, theta_degree=1):
    return surface.SurfaceModel(0, SQUARE, theta_degree, tau, multiple_fibres)

def kodaira_surface(tau=2.0, theta_degree=1):
    return surface.SurfaceModel(1, SQUARE, theta_degree, tau, base_curve=SQUARE)

@pytest.fixture
def hopf():
    return hopf_surface()

@pytest.fixture
def kodaira():
    return kodaira_surface()

@pytest.fixture
def hopf_multiple():
    return hopf_surface((surface.MultipleFibre(2, 0j), surface.MultipleFibre(3, 1 + 0j)))

@pytest.fixture
def empty_lattice():
    return nslattice.NSLattice(0, ())

@pytest.fixture
def rng():
    return random.Random(20240611)

def constant_section(s, t, curve=SQUARE):
    return torus.ConstantSection(torus.from_coordinates(s, t, curve))

def line_bundle(X, base_chern=0, alpha=1 + 0j, fibre_coeffs=None, section=None):
    if fibre_coeffs is None:
        fibre_coeffs = (0,) * X.r
    if section is None:
        section = surface.zero_section(X)
    return surface.LineBundleModel(base_chern, alpha, tuple(fibre_coeffs), section)
