# Weierstrass p-function of a lattice Z + Z*lattice_tau and its inverse
#
# Values are computed by direct lattice summation over the box |m|, |n| <= terms
# in a modular-reduced basis, with the outside of the box replaced by its
# Laurent expansion against q-series Eisenstein values.
from dataclasses import dataclass
from functools import lru_cache
import cmath
import math

import numpy as np

from modules.errors import NoConvergence
from modules.helpers import format_complex
from modules import torus

DEFAULT_TERMS = 200
SEED_TERMS = 24
SEED_GRID = 64
CHUNK_SIZE = 2_000_000
MAX_ITERATIONS = 120
RECIPROCAL_THRESHOLD = 1e3
Q_TERMS = 40

@dataclass(frozen=True)
class Infinity:
    """The point at infinity of P^1"""

    def __repr__(self):
        return "inf"

INFINITY = Infinity()

def is_infinity(w):
    return isinstance(w, Infinity)

def reduce_modulus(tau, max_steps=1000):
    """SL(2, Z) reduction; returns tau' = (a*tau + b) / (c*tau + d) and (a, b, c, d)"""
    tau = complex(tau)
    a, b, c, d = 1, 0, 0, 1
    for _ in range(max_steps):
        n = round(tau.real)
        tau -= n
        a -= n * c
        b -= n * d
        if abs(tau) < 1 - 1e-15:
            tau = -1 / tau
            a, b, c, d = -c, -d, a, b
        else:
            break
    return tau, (a, b, c, d)

def _divisor_power_sum(n, k):
    return sum(e ** k for e in range(1, n + 1) if n % e == 0)

def eisenstein(tau):
    """G_4, G_6, G_8, G_10 for Z + Z*tau, i.e. sum over w != 0 of w^-2k"""
    q = cmath.exp(2j * math.pi * complex(tau))
    e4 = 1 + 240 * sum(_divisor_power_sum(n, 3) * q ** n for n in range(1, Q_TERMS))
    e6 = 1 - 504 * sum(_divisor_power_sum(n, 5) * q ** n for n in range(1, Q_TERMS))
    pi = math.pi
    return {
        4: pi ** 4 / 45 * e4,
        6: 2 * pi ** 6 / 945 * e6,
        8: 2 * pi ** 8 / 9450 * e4 * e4,
        10: 2 * pi ** 10 / 93555 * e4 * e6,
    }

class WeierstrassLattice:
    def __init__(self, curve, terms=DEFAULT_TERMS):
        self.curve = curve
        self.terms = int(terms)

        lattice_tau = complex(curve.lattice_tau)
        self.reduced_tau, (a, b, c, d) = reduce_modulus(lattice_tau)
        # Z + Z*lattice_tau = kappa * (Z + Z*reduced_tau)
        self.kappa = c * lattice_tau + d

        span = np.arange(-self.terms, self.terms + 1)
        m, n = np.meshgrid(span, span)
        keep = (m != 0) | (n != 0)
        self.points = (m[keep] + n[keep] * self.reduced_tau).astype(np.complex128)
        self.inverse_squares = self.points ** -2

        G = eisenstein(self.reduced_tau)
        self.tails = []
        for k in range(1, 5):
            weight = 2 * k + 2
            self.tails.append(G[weight] - np.sum(self.points ** -weight))

        self.g2 = 60 * G[4] * self.kappa ** -4
        self.g3 = 140 * G[6] * self.kappa ** -6
        self._seeds = None

    # reduced-basis evaluation

    def _centre(self, y):
        tau = self.reduced_tau
        t = y.imag / tau.imag
        s = y.real - t * tau.real
        return (s - round(s)) + (t - round(t)) * tau

    def _values(self, ys, derivative=False):
        ys = np.atleast_1d(np.asarray(ys, dtype=np.complex128))
        out = np.empty(ys.shape, dtype=np.complex128)
        chunk = max(1, CHUNK_SIZE // len(self.points))
        for start in range(0, len(ys), chunk):
            y = ys[start:start + chunk]
            diff = y[:, None] - self.points[None, :]
            if derivative:
                result = -2 / y ** 3 + np.sum(-2 / diff ** 3, axis=1)
                for k, tail in enumerate(self.tails, start=1):
                    result = result + 2 * k * (2 * k + 1) * y ** (2 * k - 1) * tail
            else:
                result = 1 / y ** 2 + np.sum(1 / diff ** 2 - self.inverse_squares[None, :], axis=1)
                for k, tail in enumerate(self.tails, start=1):
                    result = result + (2 * k + 1) * y ** (2 * k) * tail
            out[start:start + chunk] = result
        return out

    def _reduced_value(self, y, derivative=False):
        return complex(self._values([y], derivative)[0])

    def _at(self, z, derivative):
        y = self._centre(complex(z) / self.kappa)
        if abs(y) <= torus.TOLERANCE:
            return INFINITY
        power = 3 if derivative else 2
        return self._reduced_value(y, derivative) * self.kappa ** -power

    def value(self, z):
        return self._at(z, False)

    def derivative(self, z):
        return self._at(z, True)

    def values(self, zs, derivative=False):
        """Vectorised evaluation away from the poles"""
        ys = np.array([self._centre(complex(z) / self.kappa) for z in np.ravel(zs)])
        power = 3 if derivative else 2
        return self._values(ys, derivative) * self.kappa ** -power

    def half_periods(self):
        tau = complex(self.curve.lattice_tau)
        return [0.5 + 0j, tau / 2, (1 + tau) / 2]

    def branch_values(self):
        return [self.value(h) for h in self.half_periods()]

    # inversion

    def _seed_table(self):
        if self._seeds is None:
            coarse = get_lattice(self.curve, min(self.terms, SEED_TERMS))
            grid = (np.arange(SEED_GRID) + 0.5) / SEED_GRID
            s, t = np.meshgrid(grid, grid)
            ys = np.array([self._centre(y) for y in (s + t * self.reduced_tau).ravel()])
            self._seeds = (ys, coarse._values(ys))
        return self._seeds

    def _invert_reduced(self, target):
        reciprocal = abs(target) > RECIPROCAL_THRESHOLD

        def residual(y):
            p = self._reduced_value(y)
            return (1 / p - 1 / target) if reciprocal else (p - target)

        ys, table = self._seed_table()
        if reciprocal:
            y = ys[int(np.argmin(np.abs(1 / table - 1 / target)))]
            tolerance = 1e-12 / abs(target)
        else:
            y = ys[int(np.argmin(np.abs(table - target)))]
            tolerance = 1e-12 * max(1.0, abs(target))

        r = residual(y)
        iterations = 0
        while iterations < MAX_ITERATIONS and abs(r) > tolerance:
            iterations += 1
            p = self._reduced_value(y)
            dp = self._reduced_value(y, derivative=True)
            slope = -dp / p ** 2 if reciprocal else dp
            if slope == 0:
                break

            step = r / slope
            damping = 1.0
            while damping > 1e-6:
                candidate = self._centre(y - damping * step)
                if abs(candidate) > torus.TOLERANCE:
                    r_candidate = residual(candidate)
                    if abs(r_candidate) < abs(r):
                        break
                damping /= 2
            else:
                break
            y, r = candidate, r_candidate

        # stalled at rounding level next to a branch value
        if abs(r) <= 1e3 * tolerance:
            return y

        raise NoConvergence(
            "could not invert the Weierstrass function",
            {
                "target": format_complex(target * self.kappa ** -2),
                "residual": float(abs(r)),
                "iterations": iterations,
                "hint": "move the sample away from branch values or raise --wp-terms",
            },
        )

    def invert(self, w):
        """One solution z of p(z) = w, as a TorusPoint; the other is -z"""
        if is_infinity(w):
            return torus.torus_reduce(0j, self.curve)

        w = complex(w)
        for half, e in zip(self.half_periods(), self.branch_values()):
            if abs(w - e) <= 1e-12 * max(1.0, abs(w)):
                return torus.torus_reduce(half, self.curve)

        y = self._invert_reduced(w * self.kappa ** 2)
        return torus.torus_reduce(y * self.kappa, self.curve)

@lru_cache(maxsize=32)
def get_lattice(curve, terms=DEFAULT_TERMS):
    return WeierstrassLattice(curve, terms)

def weierstrass_p(z, curve, terms=DEFAULT_TERMS):
    return get_lattice(curve, terms).value(z)

def weierstrass_p_prime(z, curve, terms=DEFAULT_TERMS):
    return get_lattice(curve, terms).derivative(z)

def invariants(curve, terms=DEFAULT_TERMS):
    lattice = get_lattice(curve, terms)
    return lattice.g2, lattice.g3

def branch_residual(curve, terms=DEFAULT_TERMS):
    """Largest |4e^3 - g2 e - g3| over the branch values e_1, e_2, e_3"""
    g2, g3 = invariants(curve, terms)
    return max(abs(4 * e ** 3 - g2 * e - g3) for e in get_lattice(curve, terms).branch_values())
