# Non-Kahler elliptic surfaces X = Theta* / <tau> with multiple fibres,
# Gauduchon degrees of line bundles and Poisson structures
from dataclasses import dataclass
from fractions import Fraction
from enum import Enum
import cmath
import math

from modules.errors import ModelError, DomainError
from modules.helpers import same_base_point, to_fraction
from modules import torus

DEFAULT_EPSILON = 1e-9

@dataclass(frozen=True)
class MultipleFibre:
    multiplicity: int
    base_point: object

@dataclass(frozen=True)
class SurfaceModel:
    base_genus: int
    fibre: torus.EllipticCurve
    theta_degree: int
    tau: complex
    multiple_fibres: tuple = ()
    base_curve: torus.EllipticCurve = None

    def __post_init__(self):
        object.__setattr__(self, "multiple_fibres", tuple(self.multiple_fibres))
        validate_surface(self)

    @property
    def r(self):
        return len(self.multiple_fibres)

    def multiplicities(self):
        return [f.multiplicity for f in self.multiple_fibres]

    def fibre_index(self, base_point):
        for index, fibre in enumerate(self.multiple_fibres):
            if same_base_point(fibre.base_point, base_point):
                return index
        return None

def validate_surface(X):
    if not isinstance(X.base_genus, int) or X.base_genus < 0:
        raise ModelError("base genus must be a non-negative integer", {"base_genus": X.base_genus})
    if (X.base_genus == 1) != (X.base_curve is not None):
        raise ModelError("a base curve lattice is required exactly when the base genus is 1")
    if abs(complex(X.tau)) <= 1:
        raise ModelError("|tau| must be greater than 1", {"tau": str(X.tau)})
    if X.theta_degree < 1:
        raise ModelError("the Chern class d of Theta must be at least 1", {"theta_degree": X.theta_degree})

    for index, fibre in enumerate(X.multiple_fibres):
        if fibre.multiplicity < 2:
            raise ModelError("multiple fibres need multiplicity >= 2", {"index": index})
        for other in X.multiple_fibres[index + 1:]:
            if same_base_point(fibre.base_point, other.base_point):
                raise ModelError("multiple fibres must lie over distinct base points", {"index": index})

@dataclass(frozen=True, order=False)
class Degree:
    """Gauduchon degree: exact rational part plus a real part from |alpha|"""
    rational_part: Fraction = Fraction(0)
    real_part: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rational_part", to_fraction(self.rational_part))
        object.__setattr__(self, "real_part", float(self.real_part))

    def __add__(self, other):
        other = as_degree(other)
        return Degree(self.rational_part + other.rational_part, self.real_part + other.real_part)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_degree(other)
        return Degree(self.rational_part - other.rational_part, self.real_part - other.real_part)

    def __rsub__(self, other):
        return as_degree(other) - self

    def __neg__(self):
        return Degree(-self.rational_part, -self.real_part)

    def scaled(self, factor):
        factor = to_fraction(factor)
        return Degree(self.rational_part * factor, self.real_part * float(factor))

    def half(self):
        return self.scaled(Fraction(1, 2))

    def total(self):
        return float(self.rational_part) + self.real_part

    def sign(self, epsilon=DEFAULT_EPSILON):
        # the tolerance only ever applies to the real part
        if abs(self.real_part) <= epsilon:
            value = self.rational_part
        else:
            value = float(self.rational_part) + self.real_part
        return (value > 0) - (value < 0)

    def compare(self, other, epsilon=DEFAULT_EPSILON):
        return (self - as_degree(other)).sign(epsilon)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def close_to(self, other, epsilon=DEFAULT_EPSILON):
        return self.compare(other, epsilon) == 0

def as_degree(value):
    if isinstance(value, Degree):
        return value
    return Degree(to_fraction(value), 0.0)

@dataclass(frozen=True)
class LineBundleModel:
    base_chern: int
    alpha: complex
    fibre_coeffs: tuple
    section: object

    def __post_init__(self):
        object.__setattr__(self, "fibre_coeffs", tuple(int(a) for a in self.fibre_coeffs))

def _check_bundle(L, X):
    if len(L.fibre_coeffs) != X.r:
        raise ModelError(
            "one fibre coefficient is needed per multiple fibre",
            {"fibre_coeffs": len(L.fibre_coeffs), "multiple_fibres": X.r},
        )

def degree(L, X):
    """deg L = c1(H) + sum a_i/m_i - (d / ln|tau|) ln|alpha|"""
    validate_surface(X)
    _check_bundle(L, X)
    if abs(complex(L.alpha)) == 0:
        raise DomainError("alpha must be non-zero")

    rational = Fraction(L.base_chern)
    for a, fibre in zip(L.fibre_coeffs, X.multiple_fibres):
        rational += Fraction(a, fibre.multiplicity)

    real = -(X.theta_degree / math.log(abs(complex(X.tau)))) * math.log(abs(complex(L.alpha)))
    return Degree(rational, real)

def relative_dualising_degree(X):
    """deg omega_{X/B} = r - sum 1/m_i"""
    value = Fraction(X.r)
    for m in X.multiplicities():
        value -= Fraction(1, m)
    return Degree(value, 0.0)

class PoissonVerdict(Enum):
    SYMPLECTIC = "symplectic"
    DEGENERATE = "degenerate"
    NONE = "none"

def poisson_exists(X):
    # sections of K_X^{-1} = pi^* K_B^{-1} (x) O_X(sum (1 - m_i) T_i)
    if X.r > 0 or X.base_genus > 1:
        return PoissonVerdict.NONE
    if X.base_genus == 1:
        return PoissonVerdict.SYMPLECTIC
    return PoissonVerdict.DEGENERATE

def anticanonical_summary(X):
    return {
        "base_degree": 2 - 2 * X.base_genus,
        "fibre_defects": [1 - m for m in X.multiplicities()],
        "poisson": poisson_exists(X).value,
    }

# group structure on line bundle models

def add_sections(first, second):
    if isinstance(first, torus.ConstantSection) and isinstance(second, torus.ConstantSection):
        return torus.ConstantSection(torus.add(first.value, second.value))
    base = first.base if isinstance(first, torus.AffineSection) else second.base
    return torus.AffineSection(
        torus.slope(first) + torus.slope(second),
        torus.add(torus.offset(first), torus.offset(second)),
        base,
    )

def negate_section(section):
    if isinstance(section, torus.ConstantSection):
        return torus.ConstantSection(torus.negate(section.value))
    return torus.AffineSection(-complex(section.u), torus.negate(section.c), section.base)

def zero_section(X):
    return torus.ConstantSection(torus.from_coordinates(0, 0, X.fibre))

def trivial_bundle(X):
    return LineBundleModel(0, 1 + 0j, (0,) * X.r, zero_section(X))

def tensor(first, second):
    if len(first.fibre_coeffs) != len(second.fibre_coeffs):
        raise ModelError("line bundles live on surfaces with different fibre counts")
    return LineBundleModel(
        first.base_chern + second.base_chern,
        complex(first.alpha) * complex(second.alpha),
        tuple(a + b for a, b in zip(first.fibre_coeffs, second.fibre_coeffs)),
        add_sections(first.section, second.section),
    )

def dual(L):
    return LineBundleModel(
        -L.base_chern,
        1 / complex(L.alpha),
        tuple(-a for a in L.fibre_coeffs),
        negate_section(L.section),
    )

def power(L, n):
    base = L if n >= 0 else dual(L)
    result = LineBundleModel(0, 1 + 0j, (0,) * len(L.fibre_coeffs), _zero_like(L.section))
    for _ in range(abs(n)):
        result = tensor(result, base)
    return result

def _zero_like(section):
    curve = torus.section_curve(section)
    return torus.ConstantSection(torus.from_coordinates(0, 0, curve))

def p2_twist(L, base_shift=0, fibre_shifts=None):
    """Act by pi^*Pic(B) and the O_X(T_i); the spectral section is unchanged"""
    fibre_shifts = tuple(fibre_shifts or (0,) * len(L.fibre_coeffs))
    if len(fibre_shifts) != len(L.fibre_coeffs):
        raise ModelError("one shift is needed per multiple fibre")
    return LineBundleModel(
        L.base_chern + base_shift,
        L.alpha,
        tuple(a + s for a, s in zip(L.fibre_coeffs, fibre_shifts)),
        L.section,
    )

def fibre_bundle(X, base_point=None):
    """O_X(F) for the fibre over base_point: O_X(T_i) at a multiple fibre, pi^*O_B(b) otherwise"""
    index = X.fibre_index(base_point) if base_point is not None else None
    coeffs = [0] * X.r
    if index is None:
        return LineBundleModel(1, 1 + 0j, tuple(coeffs), zero_section(X))
    coeffs[index] = 1
    return LineBundleModel(0, 1 + 0j, tuple(coeffs), zero_section(X))

def relative_dualising_sheaf(X):
    return LineBundleModel(0, 1 + 0j, tuple(m - 1 for m in X.multiplicities()), zero_section(X))

def p2_step(X):
    """Generator of the degree group of P_2: Z + sum Z/m_i = (1/lcm m_i) Z"""
    step = 1
    for m in X.multiplicities():
        step = step * m // math.gcd(step, m)
    return Fraction(1, step)

def p2_normalise(deg, low, high, X, epsilon=DEFAULT_EPSILON):
    """Degrees deg + k*step (k in Z) lying strictly inside (low, high)"""
    step = p2_step(X)
    span = (as_degree(high) - as_degree(low)).total()
    if span <= 0:
        return []
    offset = (as_degree(low) - deg).total()
    start = math.floor(offset / float(step)) - 1
    found = []
    k = start
    while True:
        candidate = deg + Degree(step * k, 0.0)
        if candidate.compare(high, epsilon) >= 0:
            break
        if candidate.compare(low, epsilon) > 0:
            found.append(candidate)
        k += 1
    return found

# flat line bundles L_alpha and the fibre T* = C^* / <tau>

def natural_fibre(X):
    return torus.EllipticCurve(-cmath.log(complex(X.tau)) / (2j * math.pi))

def flat_point(X, alpha):
    """Point of T* (natural chart) carried by L_alpha on every fibre"""
    alpha = complex(alpha)
    if alpha == 0:
        raise DomainError("alpha must be non-zero")
    curve = natural_fibre(X)
    return torus.torus_reduce(-cmath.log(alpha) / (2j * math.pi), curve)

def flat_bundle(X, point, base_chern=0):
    alpha = cmath.exp(-2j * math.pi * point.z)
    return LineBundleModel(base_chern, alpha, (0,) * X.r, torus.ConstantSection(point))
