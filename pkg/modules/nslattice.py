# Neron-Severi lattice NS(X), m(2, c1) and the determinant class delta
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from modules.errors import ModelError, DomainError

@dataclass(frozen=True)
class NSLattice:
    rank: int
    gram: tuple

    def __post_init__(self):
        object.__setattr__(self, "gram", tuple(tuple(int(x) for x in row) for row in self.gram))
        validate_lattice(self)

@dataclass(frozen=True)
class ChernData:
    c1: tuple
    c2: int

    def __post_init__(self):
        object.__setattr__(self, "c1", tuple(int(x) for x in self.c1))

@dataclass(frozen=True)
class AdmissibleRange:
    c2_min: Fraction
    band_low: Fraction
    band_high: Fraction

    @property
    def band_empty(self):
        return self.band_low >= self.band_high

    def band_integers(self):
        return list(range(math.ceil(self.band_low), math.ceil(self.band_high)))

def validate_lattice(ns):
    if len(ns.gram) != ns.rank or any(len(row) != ns.rank for row in ns.gram):
        raise ModelError("gram matrix must be rank x rank", {"rank": ns.rank})
    for i in range(ns.rank):
        for j in range(i):
            if ns.gram[i][j] != ns.gram[j][i]:
                raise ModelError("gram matrix must be symmetric", {"row": i, "column": j})
    if ns.rank == 0:
        return

    eigenvalues = np.linalg.eigvalsh(np.array(ns.gram, dtype=float))
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    if eigenvalues.max() > 1e-9 * scale:
        raise ModelError(
            "intersection form must be negative semi-definite",
            {"largest_eigenvalue": float(eigenvalues.max())},
        )

def _vector(ns, v):
    v = tuple(v)
    if len(v) != ns.rank:
        raise ModelError("class has the wrong length for NS(X)", {"rank": ns.rank, "length": len(v)})
    return v

def pairing(ns, x, y):
    x = _vector(ns, x)
    y = _vector(ns, y)
    total = Fraction(0)
    for i in range(ns.rank):
        for j in range(ns.rank):
            if ns.gram[i][j]:
                total += Fraction(x[i]) * ns.gram[i][j] * Fraction(y[j])
    return total

def square(ns, x):
    return pairing(ns, x, x)

# exact closest-vector search for the positive semi-definite form -q

def _extended_gcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _extended_gcd(b, a % b)
    return g, y, x - (a // b) * y

def kernel_split(gram):
    """Unimodular U (with its inverse) such that U^T G U = [[G0, 0], [0, 0]], G0 non-degenerate"""
    n = len(gram)
    H = [list(row) for row in gram]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    U_inv = [row[:] for row in U]

    col = 0
    for row in range(n):
        if col >= n:
            break
        for j in range(col + 1, n):
            b = H[row][j]
            if b == 0:
                continue
            a = H[row][col]
            g, x, y = _extended_gcd(a, b)
            p, s = -b // g, a // g
            # columns (col, j) <- (x*col + y*j, p*col + s*j), determinant 1
            for M in (H, U):
                for r in range(n):
                    u, v = M[r][col], M[r][j]
                    M[r][col] = x * u + y * v
                    M[r][j] = p * u + s * v
            for c in range(n):
                u, v = U_inv[col][c], U_inv[j][c]
                U_inv[col][c] = s * u - p * v
                U_inv[j][c] = -y * u + x * v
        if H[row][col] != 0:
            col += 1

    return U, U_inv, col

def _fincke_pohst_form(A):
    n = len(A)
    q = [[Fraction(x) for x in row] for row in A]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q

def _quadratic(A, x):
    return sum(A[i][j] * x[i] * x[j] for i in range(len(x)) for j in range(len(x)))

def closest_points(A, shift):
    """All integer z minimising x^T A x for x = z + shift, A positive definite"""
    n = len(A)
    if n == 0:
        return Fraction(0), [()]

    q = _fincke_pohst_form(A)
    babai = [round(-s) for s in shift]
    bound = _quadratic(A, [z + s for z, s in zip(babai, shift)])

    best = [bound, []]
    z = [0] * n

    def search(i, partial):
        if i < 0:
            if partial < best[0]:
                best[0] = partial
                best[1] = [tuple(z)]
            elif partial == best[0]:
                best[1].append(tuple(z))
            return
        centre = -sum(q[i][j] * (z[j] + shift[j]) for j in range(i + 1, n))
        room = (best[0] - partial) / q[i][i]
        if room < 0:
            return
        width = math.sqrt(float(room)) + 1
        low = math.floor(float(centre - shift[i]) - width)
        high = math.ceil(float(centre - shift[i]) + width)
        for value in range(low, high + 1):
            z[i] = value
            term = q[i][i] * (value + shift[i] - centre) ** 2
            if partial + term <= best[0]:
                search(i - 1, partial + term)
        z[i] = 0

    search(n - 1, Fraction(0))
    return best[0], sorted(set(best[1]))

def _minimisers(ns, c1):
    """min of -q over c1 + 2NS, and every minimiser with kernel coordinates fixed"""
    c1 = _vector(ns, c1)
    n = ns.rank
    U, U_inv, r = kernel_split(ns.gram)

    y = [sum(U_inv[i][j] * c1[j] for j in range(n)) for i in range(n)]
    G0 = [[-sum(U[a][i] * ns.gram[a][b] * U[b][j] for a in range(n) for b in range(n))
           for j in range(r)] for i in range(r)]

    # -q(y + 2z) = 4 * Q0(z + y/2)
    shift = [Fraction(y[i], 2) for i in range(r)]
    value, points = closest_points(G0, shift)

    classes = []
    for z in points:
        top = [y[i] + 2 * z[i] for i in range(r)]
        full = top + y[r:]
        classes.append(tuple(sum(U[i][j] * full[j] for j in range(n)) for i in range(n)))
    return 4 * value, sorted(classes)

def m_two(ns, c1, summands=2):
    """m(2, c1) = -1/2 max_mu q(c1/2 - mu) = 1/8 min over w in c1 + 2NS of -q(w)"""
    if summands != 2:
        raise DomainError("m(n, c1) is only defined here for rank-2 decompositions", {"n": summands})
    minimum, _ = _minimisers(ns, c1)
    return minimum / 8

def select_delta_class(ns, c1):
    # ties go to the lexicographically smallest class
    _, classes = _minimisers(ns, c1)
    return classes[0]

def discriminant_numeric(ns, c):
    return (Fraction(c.c2) - square(ns, c.c1) / 4) / 2

def filtrable_exists(ns, c):
    return discriminant_numeric(ns, c) >= m_two(ns, c.c1)

def c2_admissible_range(ns, c1):
    m = m_two(ns, c1)
    return AdmissibleRange(c2_min=-2 * m, band_low=-2 * m, band_high=Fraction(0))

def dimension_formula(ns, delta_class, c2):
    """4 c2 - c1(delta)^2, which equals 8 Delta(2, c1, c2)"""
    return 4 * Fraction(c2) - square(ns, delta_class)
