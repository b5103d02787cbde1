# Complex tori C / (Z + Z*lattice_tau) and sections of J(X) = B x T*
from dataclasses import dataclass
import math

from modules.errors import ModelError

TOLERANCE = 1e-9

@dataclass(frozen=True)
class EllipticCurve:
    lattice_tau: complex

    def __post_init__(self):
        if not complex(self.lattice_tau).imag > 0:
            raise ModelError(
                "lattice_tau must have positive imaginary part",
                {"lattice_tau": str(self.lattice_tau)},
            )

    def periods(self):
        return (1 + 0j, complex(self.lattice_tau))

@dataclass(frozen=True)
class TorusPoint:
    # canonical data are the coordinates in the (1, lattice_tau) basis
    s: float
    t: float
    curve: EllipticCurve

    @property
    def z(self):
        return self.s + self.t * complex(self.curve.lattice_tau)

def coordinates(z, curve):
    tau = complex(curve.lattice_tau)
    z = complex(z)
    t = z.imag / tau.imag
    s = z.real - t * tau.real
    return s, t

def _unit_interval(x):
    x = x - math.floor(x)
    if x >= 1.0 - 1e-12:
        x = 0.0
    return x + 0.0

def torus_reduce(z, curve):
    """Representative of z in the fundamental domain {s + t*tau : s, t in [0, 1)}"""
    if isinstance(z, TorusPoint):
        if 0.0 <= z.s < 1.0 and 0.0 <= z.t < 1.0:
            return z
        s, t = z.s, z.t
    else:
        s, t = coordinates(z, curve)
    return TorusPoint(_unit_interval(s), _unit_interval(t), curve)

def from_coordinates(s, t, curve):
    return torus_reduce(TorusPoint(float(s), float(t), curve), curve)

def centred_difference(p, q):
    """Smallest representative of p - q, as a complex number"""
    ds = p.s - q.s
    dt = p.t - q.t
    ds -= round(ds)
    dt -= round(dt)
    return ds + dt * complex(p.curve.lattice_tau)

def points_equal(p, q, tol=TOLERANCE):
    return abs(centred_difference(p, q)) <= tol

def torus_distance(p, q):
    # nearest lattice translate among the 3x3 neighbours of the centred difference
    base = centred_difference(p, q)
    tau = complex(p.curve.lattice_tau)
    return min(abs(base + m + n * tau) for m in (-1, 0, 1) for n in (-1, 0, 1))

def add(p, q):
    return torus_reduce(TorusPoint(p.s + q.s, p.t + q.t, p.curve), p.curve)

def negate(p):
    return torus_reduce(TorusPoint(-p.s, -p.t, p.curve), p.curve)

def is_lattice_vector(w, curve, tol=TOLERANCE):
    s, t = coordinates(w, curve)
    return abs(s - round(s)) <= tol and abs(t - round(t)) <= tol

# Sections of J(X) -> B

@dataclass(frozen=True)
class ConstantSection:
    value: TorusPoint

@dataclass(frozen=True)
class AffineSection:
    # b -> u*b + c, for an elliptic base B = C / (Z + Z*base.lattice_tau)
    u: complex
    c: TorusPoint
    base: EllipticCurve

    def __post_init__(self):
        fibre = self.c.curve
        u = complex(self.u)
        for period in self.base.periods():
            if not is_lattice_vector(u * period, fibre):
                raise ModelError(
                    "affine section does not descend: u * Lambda_B is not inside Lambda_T*",
                    {"u": str(u), "period": str(period)},
                )

def section_curve(section):
    if isinstance(section, ConstantSection):
        return section.value.curve
    return section.c.curve

def slope(section):
    if isinstance(section, ConstantSection):
        return 0j
    return complex(section.u)

def offset(section):
    if isinstance(section, ConstantSection):
        return section.value
    return section.c

def evaluate_section(section, b):
    if isinstance(section, ConstantSection):
        return section.value
    if b is None or isinstance(b, str):
        raise ModelError(
            "affine sections need complex base points",
            {"base_point": b},
        )
    curve = section.c.curve
    return torus_reduce(complex(section.u) * complex(b) + section.c.z, curve)

def sections_equal(first, second, tol=TOLERANCE):
    return (
        abs(slope(first) - slope(second)) <= tol
        and points_equal(offset(first), offset(second), tol)
    )
