# The relative Jacobian J(X) = B x T*, the involution i_delta and the
# quotient map eta onto the ruled surface F_delta
from dataclasses import dataclass
from fractions import Fraction
import cmath
import math

import numpy as np

from modules.errors import ModelError, DomainError, NoConvergence
from modules.helpers import same_base_point, format_base_point
from modules.torus import (
    TOLERANCE,
    ConstantSection,
    AffineSection,
    torus_reduce,
    coordinates,
    evaluate_section,
    points_equal,
    sections_equal,
    slope,
    offset,
    torus_distance,
)
from modules.weierstrass import (
    DEFAULT_TERMS,
    INFINITY,
    is_infinity,
    get_lattice,
    weierstrass_p,
)
from modules import torus

COINCIDENT = "coincident"
LOOP_POINTS = 256

# divisors on J(X) and F_delta

@dataclass(frozen=True)
class Reducible:
    s1: object
    s2: object

    def is_multiple(self):
        return sections_equal(self.s1, self.s2)

@dataclass(frozen=True)
class Irreducible:
    graph_section: object

@dataclass(frozen=True)
class Unknown:
    graph_section: object
    reason: str

@dataclass(frozen=True)
class VerticalComponent:
    base_point: object
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ModelError(
                "vertical multiplicities must be at least 1",
                {"base_point": format_base_point(self.base_point)},
            )

def _check_distinct(vertical):
    for index, component in enumerate(vertical):
        for other in vertical[index + 1:]:
            if same_base_point(component.base_point, other.base_point):
                raise ModelError(
                    "vertical components must lie over distinct base points",
                    {"base_point": format_base_point(component.base_point)},
                )

@dataclass(frozen=True)
class SpectralCover:
    vertical: tuple
    horizontal: object

    def __post_init__(self):
        object.__setattr__(self, "vertical", tuple(self.vertical))
        _check_distinct(self.vertical)

    def vertical_multiplicity(self, base_point):
        for component in self.vertical:
            if same_base_point(component.base_point, base_point):
                return component.multiplicity
        return 0

@dataclass(frozen=True)
class Involution:
    delta_section: object

@dataclass(frozen=True)
class PolynomialMap:
    """Rational map P^1 -> P^1, coefficients constant term first"""
    numerator: tuple
    denominator: tuple = (1,)

    def __post_init__(self):
        numerator = _trim(self.numerator)
        denominator = _trim(self.denominator)
        if not any(denominator):
            raise ModelError("denominator of a rational map must be non-zero")
        if not any(numerator):
            if len(denominator) > 1:
                raise ModelError("numerator and denominator must be coprime")
        elif _common_root(numerator, denominator):
            raise ModelError("numerator and denominator must be coprime")
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "denominator", denominator)

    @property
    def degree(self):
        if not any(self.numerator):
            return 0
        return max(len(self.numerator), len(self.denominator)) - 1

    def __call__(self, b):
        if is_infinity(b):
            top = len(self.numerator) - len(self.denominator)
            if top > 0:
                return INFINITY
            if top < 0:
                return 0j
            return self.numerator[-1] / self.denominator[-1]
        b = complex(b)
        num = np.polyval(self.numerator[::-1], b)
        den = np.polyval(self.denominator[::-1], b)
        if abs(den) <= TOLERANCE * max(1.0, abs(num)):
            return INFINITY
        return complex(num / den)

@dataclass(frozen=True)
class SampledMap:
    """Map B -> P^1 for an elliptic base, known through samples and its degree"""
    samples: tuple
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(tuple(s) for s in self.samples))
        if self.degree < 0:
            raise ModelError("declared degree must be non-negative", {"degree": self.degree})
        if not self.samples:
            raise ModelError("a sampled map needs at least one sample")
        if self.degree == 0 and not _all_equal([value for _, value in self.samples]):
            raise ModelError("a degree 0 map must take a single value")

    def constant_value(self):
        return self.samples[0][1]

@dataclass(frozen=True)
class GraphDivisor:
    vertical: tuple
    section: object

    def __post_init__(self):
        object.__setattr__(self, "vertical", tuple(self.vertical))
        _check_distinct(self.vertical)

    def vertical_total(self):
        return sum(component.multiplicity for component in self.vertical)

def _trim(coefficients):
    coefficients = [complex(c) for c in coefficients] or [0j]
    while len(coefficients) > 1 and abs(coefficients[-1]) == 0:
        coefficients.pop()
    return tuple(coefficients)

def _common_root(numerator, denominator):
    if len(numerator) < 2 or len(denominator) < 2:
        return False
    for root in np.roots(numerator[::-1]):
        if abs(np.polyval(denominator[::-1], root)) <= 1e-8 * max(1.0, abs(root)) ** (len(denominator) - 1):
            return True
    return False

def _all_equal(values):
    first = values[0]
    for value in values[1:]:
        if is_infinity(first) or is_infinity(value):
            if is_infinity(first) != is_infinity(value):
                return False
        elif abs(complex(first) - complex(value)) > TOLERANCE * max(1.0, abs(complex(first))):
            return False
    return True

# involution and quotient map

def involution_apply(i, b, point):
    sigma = evaluate_section(i.delta_section, b)
    return torus_reduce(sigma.z - point.z, point.curve)

def _half_delta(i, b):
    sigma = evaluate_section(i.delta_section, b)
    return torus.TorusPoint(sigma.s / 2, sigma.t / 2, sigma.curve)

def eta_project(i, b, point, terms=DEFAULT_TERMS):
    half = _half_delta(i, b)
    return weierstrass_p(point.z - half.z, point.curve, terms)

def eta_fibre_lift(i, b, w, terms=DEFAULT_TERMS):
    """The pair {lambda, sigma_delta(b) - lambda} over w"""
    half = _half_delta(i, b)
    curve = half.curve
    x = get_lattice(curve, terms).invert(w)
    return (
        torus_reduce(half.z + x.z, curve),
        torus_reduce(half.z - x.z, curve),
    )

# intersections and genera

def _check_section(section, X):
    if isinstance(section, AffineSection):
        if X.base_genus != 1:
            raise ModelError("affine sections need an elliptic base curve")
    elif not isinstance(section, ConstantSection):
        raise ModelError(
            "only constant and affine sections of J(X) are supported",
            {"section": type(section).__name__},
        )

def section_intersections(s1, s2, X):
    _check_section(s1, X)
    _check_section(s2, X)

    u = slope(s1) - slope(s2)
    if abs(u) <= TOLERANCE:
        if points_equal(offset(s1), offset(s2)):
            return COINCIDENT
        return 0

    # |det| of multiplication by u from Lambda_B to Lambda_T*
    fibre = torus.section_curve(s1)
    matrix = []
    for period in X.base_curve.periods():
        s, t = coordinates(u * period, fibre)
        if abs(s - round(s)) > TOLERANCE or abs(t - round(t)) > TOLERANCE:
            raise ModelError(
                "u * Lambda_B is not contained in Lambda_T*",
                {"u": str(u), "period": str(period)},
            )
        matrix.append((round(s), round(t)))
    (a, b), (c, d) = matrix
    return abs(a * d - b * c)

def bisection_genus(Delta, g):
    value = 4 * Fraction(Delta) + 2 * g - 1
    if value.denominator != 1 or value < 0:
        raise DomainError(
            "4 Delta + 2g - 1 must be a non-negative integer",
            {"Delta": str(Delta), "g": g},
        )
    return int(value)

def riemann_hurwitz_check(g, branch_count):
    if branch_count < 0 or branch_count % 2:
        raise DomainError("branch count must be even and non-negative", {"branch_count": branch_count})
    return 2 * g - 1 + branch_count // 2

def numerical_class_check(G, c2):
    return G.vertical_total() + G.section.degree == c2

# graph pullback

def _constant_pullback(A, w, i, terms):
    sigma = i.delta_section
    if not isinstance(sigma, ConstantSection):
        return Unknown(A, "pullback of a constant graph needs a constant delta section")
    first, second = eta_fibre_lift(i, None, w, terms)
    return Reducible(ConstantSection(first), ConstantSection(second))

def _cluster(roots, tolerance=1e-4):
    groups = []
    for root in roots:
        for group in groups:
            if abs(group[0] - root) <= tolerance * max(1.0, abs(root)):
                group.append(root)
                break
        else:
            groups.append([root])
    return [(complex(np.mean(group)), len(group)) for group in groups]

def _special_points(A, branch_values):
    """Points of C where A meets a branch value, with multiplicities"""
    den = np.array(A.denominator[::-1])
    points = []
    for e in branch_values:
        poly = np.polysub(np.array(A.numerator[::-1]), e * den)
        poly = np.trim_zeros(poly, "f")
        if len(poly) > 1:
            points.extend(_cluster(np.roots(poly)))
    if len(den) > 1:
        points.extend(_cluster(np.roots(den)))
    return points

def _track_loop(A, i, centre, radius, terms):
    start = None
    current = None
    step_size = 2 * math.pi * radius / LOOP_POINTS
    for k in range(LOOP_POINTS + 1):
        b = centre + radius * cmath.exp(2j * math.pi * k / LOOP_POINTS)
        pair = eta_fibre_lift(i, b, A(b), terms)
        if current is None:
            current = pair[0]
            start = pair
            continue
        near, far = sorted(pair, key=lambda p: torus_distance(p, current))
        if torus_distance(near, current) >= 0.5 * torus_distance(far, current):
            return None
        current = near
    if points_equal(current, start[0]):
        return False
    if points_equal(current, start[1]):
        return True
    return None

def graph_pullback(A, i, T, terms=DEFAULT_TERMS):
    if isinstance(A, SampledMap):
        if A.degree == 0:
            return _constant_pullback(A, A.constant_value(), i, terms)
        return Unknown(A, "monodromy of a sampled map on an elliptic base is not tracked")

    if A.degree == 0:
        return _constant_pullback(A, A(0j), i, terms)

    if not isinstance(i.delta_section, ConstantSection):
        return Unknown(A, "non-constant graphs need a constant delta section")

    branch_values = get_lattice(T, terms).branch_values()
    special = _special_points(A, branch_values)
    ambiguous = False
    for centre, multiplicity in special:
        if multiplicity % 2 == 0:
            continue
        others = [abs(centre - p) for p, _ in special if abs(centre - p) > 1e-9]
        radius = min(others) / 3 if others else 0.5
        try:
            swapped = _track_loop(A, i, centre, radius, terms)
        except NoConvergence:
            swapped = None
        if swapped:
            return Irreducible(A)
        if swapped is None:
            ambiguous = True

    reason = "monodromy tracking was inconclusive" if ambiguous else "no branch loop exchanged the sheets"
    return Unknown(A, reason)
