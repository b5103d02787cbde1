# Rank-2 bundle descriptors: spectral data, extension data and jumps
from dataclasses import dataclass, replace
from fractions import Fraction

from modules.errors import ModelError, DomainError
from modules.helpers import same_base_point, format_base_point, format_rational
from modules import surface
from modules import nslattice
from modules import jacobian
from modules.torus import sections_equal

# jumps

@dataclass(frozen=True)
class JumpDescriptor:
    base_point: object
    length: int
    jumping_sequence: tuple
    over_multiple_fibre: int = None

    def __post_init__(self):
        object.__setattr__(self, "jumping_sequence", tuple(int(h) for h in self.jumping_sequence))
        where = {"base_point": format_base_point(self.base_point)}
        if self.length < 1:
            raise ModelError("jump length must be at least 1", where)
        if len(self.jumping_sequence) != self.length:
            raise ModelError("jumping sequence must have one height per step", where)
        if any(h < 1 for h in self.jumping_sequence):
            raise ModelError("jump heights must be at least 1", where)
        for h, h_next in zip(self.jumping_sequence, self.jumping_sequence[1:]):
            if h_next > h:
                raise ModelError(
                    "jumping sequence must be non-increasing",
                    dict(where, sequence=list(self.jumping_sequence)),
                )

    @property
    def multiplicity(self):
        return sum(self.jumping_sequence)

def jumping_sequences(mu, cap=None):
    """All non-increasing sequences of positive heights summing to mu"""
    cap = mu if cap is None else cap
    if mu == 0:
        return [()]
    sequences = []
    for h in range(min(mu, cap), 0, -1):
        for rest in jumping_sequences(mu - h, h):
            sequences.append((h,) + rest)
    return sequences

# extensions

@dataclass(frozen=True)
class SplitsEverywhere:
    n: int = 0

@dataclass(frozen=True)
class SplitsOnFinitely:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ModelError("split fibre count must be non-negative", {"n": self.n})

@dataclass(frozen=True)
class NontrivialOnFinitely:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ModelError("non-split fibre count must be non-negative", {"n": self.n})

def splitting_name(splitting):
    return type(splitting).__name__

@dataclass(frozen=True)
class ExtensionData:
    destab_section: object
    destab_bundle: surface.LineBundleModel
    other_section: object
    splitting: object
    destab_class: tuple = None

    def coincident(self):
        return sections_equal(self.destab_section, self.other_section)

@dataclass(frozen=True)
class BundleDescriptor:
    determinant: surface.LineBundleModel
    det_class: tuple
    c2: int
    cover: jacobian.SpectralCover
    extension: ExtensionData = None
    jumps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "det_class", tuple(int(x) for x in self.det_class))
        object.__setattr__(self, "jumps", tuple(self.jumps))
        for index, jump in enumerate(self.jumps):
            for other in self.jumps[index + 1:]:
                if same_base_point(jump.base_point, other.base_point):
                    raise ModelError(
                        "at most one jump per fibre",
                        {"base_point": format_base_point(jump.base_point)},
                    )

    @property
    def filtrable(self):
        return self.extension is not None

    def jump_at(self, base_point):
        for jump in self.jumps:
            if same_base_point(jump.base_point, base_point):
                return jump
        return None

    def total_jump_multiplicity(self):
        return sum(jump.multiplicity for jump in self.jumps)

# discriminants and nu

def discriminant(E, ns):
    return (Fraction(E.c2) - nslattice.square(ns, E.det_class) / 4) / 2

def jump_free_discriminant(E, ns):
    return discriminant(E, ns) - Fraction(E.total_jump_multiplicity(), 2)

def delta_from_extension(delta_class, D_class, ns):
    w = tuple(d - 2 * k for d, k in zip(delta_class, D_class))
    return -nslattice.square(ns, w) / 8

def nu_invariant(E):
    nu = Fraction(0)
    for jump in E.jumps:
        if jump.over_multiple_fibre:
            nu += Fraction(jump.length, jump.over_multiple_fibre)
        else:
            nu += jump.length
    return nu

# allowable elementary modifications

def _twist_by_fibre(L, X, base_point, count):
    index = X.fibre_index(base_point)
    if index is None:
        return surface.p2_twist(L, base_shift=count)
    shifts = [0] * X.r
    shifts[index] = count
    return surface.p2_twist(L, fibre_shifts=shifts)

def _shrink_vertical(cover, base_point, drop):
    vertical = []
    for component in cover.vertical:
        if same_base_point(component.base_point, base_point):
            remaining = component.multiplicity - drop
            if remaining > 0:
                vertical.append(jacobian.VerticalComponent(component.base_point, remaining))
        else:
            vertical.append(component)
    return jacobian.SpectralCover(tuple(vertical), cover.horizontal)

def allowable_modification(E, at, X):
    jump = E.jump_at(at)
    if jump is None:
        raise DomainError("no jump over this fibre", {"base_point": format_base_point(at)})

    h0 = jump.jumping_sequence[0]
    jumps = []
    for other in E.jumps:
        if other is not jump:
            jumps.append(other)
        elif jump.length > 1:
            jumps.append(replace(jump, length=jump.length - 1, jumping_sequence=jump.jumping_sequence[1:]))

    return replace(
        E,
        determinant=_twist_by_fibre(E.determinant, X, at, -1),
        c2=E.c2 - h0,
        cover=_shrink_vertical(E.cover, at, h0),
        jumps=tuple(jumps),
    )

def remove_jump(E, at, X):
    jump = E.jump_at(at)
    if jump is None:
        raise DomainError("no jump over this fibre", {"base_point": format_base_point(at)})
    for _ in range(jump.length):
        E = allowable_modification(E, at, X)
    return E

def remove_all_jumps(E, X):
    for jump in E.jumps:
        E = remove_jump(E, jump.base_point, X)
    return E

# fibres of the projection Psi

@dataclass(frozen=True)
class AutSL2:
    def symbol(self):
        return "Aut_SL2(W|_T)"

@dataclass(frozen=True)
class PicTimesAut:
    h: int

    def symbol(self):
        return f"Pic^{{-{self.h}}}(T) x Aut"

@dataclass(frozen=True)
class PicOnly:
    degree: int

    def symbol(self):
        return f"Pic^{{{self.degree}}}(T)"

def psi_fibre_classify(c2, h0, h1, l):
    details = {"c2": c2, "h0": h0, "h1": h1, "l": l}
    if h0 < 1 or l < 0:
        raise DomainError("heights must be positive and lengths non-negative", details)
    if (h1 is None) != (l == 0):
        raise DomainError("h1 is given exactly when the remaining length l is positive", details)
    if c2 < h0:
        raise DomainError("c2 must be at least h0: the modification lowers c2 by h0", details)
    if h1 is not None and h1 > h0:
        raise DomainError("h1 cannot exceed h0 in a jumping sequence", details)

    if c2 == h0 or l == 0:
        return PicOnly(-c2)
    if h0 == h1:
        return AutSL2()
    return PicTimesAut(h0)

# destabilising bundles of the jump-free bundle

def destabilising_bundles(E, X):
    """(K1, K2) of the bundle obtained by removing every jump"""
    if not E.filtrable:
        raise DomainError("unfiltrable bundles have no destabilising line bundles")
    ext = E.extension
    reduced = remove_all_jumps(E, X)
    K1 = ext.destab_bundle
    mode = ext.splitting

    if ext.coincident():
        if isinstance(mode, NontrivialOnFinitely):
            raise ModelError("coincident sections cannot carry a NontrivialOnFinitely extension")
        return K1, K1

    if isinstance(mode, SplitsOnFinitely):
        raise ModelError("distinct sections cannot carry a SplitsOnFinitely extension")
    # K2 = K1^-1 (x) delta' (x) pi^*H_- (x) omega, deg H_- = -n
    K2 = surface.tensor(surface.dual(K1), reduced.determinant)
    K2 = surface.tensor(K2, surface.relative_dualising_sheaf(X))
    return K1, surface.p2_twist(K2, base_shift=-mode.n)

def maps_into(E, L, X, epsilon=surface.DEFAULT_EPSILON):
    """Whether L = K_j (x) pi^*H (x) O_X(sum a_i T_i) with deg H <= 0 and a_i <= 0"""
    for K in destabilising_bundles(E, X):
        if not sections_equal(K.section, L.section):
            continue
        real_gap = surface.degree(L, X).real_part - surface.degree(K, X).real_part
        if abs(real_gap) > epsilon:
            continue
        if L.base_chern <= K.base_chern and all(
            a <= b for a, b in zip(L.fibre_coeffs, K.fibre_coeffs)
        ):
            return True
    return False

# consistency

def _finding(code, message, **details):
    return {"code": code, "message": message, "details": details}

def _check_jumps(E, X, findings):
    for jump in E.jumps:
        index = X.fibre_index(jump.base_point)
        expected = None if index is None else X.multiple_fibres[index].multiplicity
        if (jump.over_multiple_fibre or None) != expected:
            findings.append(_finding(
                "jump-fibre",
                "jump multiplicity marker does not match the surface",
                base_point=format_base_point(jump.base_point),
                declared=jump.over_multiple_fibre,
                surface=expected,
            ))
        vertical = E.cover.vertical_multiplicity(jump.base_point)
        if vertical != jump.multiplicity:
            findings.append(_finding(
                "vertical-jumps",
                "vertical spectral multiplicity differs from the jump multiplicity",
                base_point=format_base_point(jump.base_point),
                vertical=vertical,
                jump=jump.multiplicity,
            ))
    for component in E.cover.vertical:
        if E.jump_at(component.base_point) is None:
            findings.append(_finding(
                "vertical-jumps",
                "vertical spectral component without a jump",
                base_point=format_base_point(component.base_point),
            ))

def _check_extension(E, ns, X, epsilon, findings):
    ext = E.extension
    horizontal = E.cover.horizontal
    Delta = jump_free_discriminant(E, ns)
    mode = ext.splitting
    coincident = ext.coincident()

    if not isinstance(horizontal, jacobian.Reducible) or not (
        (sections_equal(horizontal.s1, ext.destab_section) and sections_equal(horizontal.s2, ext.other_section))
        or (sections_equal(horizontal.s2, ext.destab_section) and sections_equal(horizontal.s1, ext.other_section))
    ):
        findings.append(_finding("sections-mismatch", "horizontal cover is not the pair of extension sections"))
    if not sections_equal(ext.destab_bundle.section, ext.destab_section):
        findings.append(_finding("destab-section", "destabilising bundle does not induce the destabilising section"))

    if not nslattice.filtrable_exists(ns, nslattice.ChernData(E.det_class, E.c2)):
        findings.append(_finding(
            "filtrability",
            "no filtrable bundle has these Chern classes",
            discriminant=format_rational(discriminant(E, ns)),
            m=format_rational(nslattice.m_two(ns, E.det_class)),
        ))

    if ext.destab_class is not None:
        expected = delta_from_extension(E.det_class, ext.destab_class, ns)
        if expected != Delta:
            findings.append(_finding(
                "jump-free-c2",
                "jump-free discriminant differs from -(c1(delta) - 2 c1(D))^2 / 8",
                jump_free=format_rational(Delta),
                extension=format_rational(expected),
            ))

    if coincident:
        if Delta != 0:
            findings.append(_finding(
                "coincident-discriminant",
                "coincident sections force a trivial jump-free discriminant",
                jump_free=format_rational(Delta),
            ))
        if isinstance(mode, NontrivialOnFinitely):
            findings.append(_finding("splitting-mode", "coincident sections need SplitsEverywhere or SplitsOnFinitely"))
        else:
            reduced = remove_all_jumps(E, X)
            pinned = (surface.degree(reduced.determinant, X) + mode.n + surface.relative_dualising_degree(X)).half()
            declared = surface.degree(ext.destab_bundle, X)
            if not declared.close_to(pinned, epsilon):
                findings.append(_finding(
                    "degree-pin",
                    "K1^2 = delta (x) pi^*H_+ (x) omega fixes deg K1",
                    declared=declared.total(),
                    pinned=pinned.total(),
                ))
        return

    count = jacobian.section_intersections(ext.destab_section, ext.other_section, X)
    if count != 4 * Delta:
        findings.append(_finding(
            "intersection-count",
            "distinct sections must meet in 4 Delta points",
            intersections=count,
            four_delta=format_rational(4 * Delta),
        ))
    if isinstance(mode, SplitsOnFinitely):
        findings.append(_finding("splitting-mode", "distinct sections need SplitsEverywhere or NontrivialOnFinitely"))
    elif Delta == 0 and not isinstance(mode, SplitsEverywhere):
        findings.append(_finding("global-splitting", "distinct sections with Delta = 0 split globally"))
    elif mode.n > 4 * Delta:
        findings.append(_finding(
            "splitting-count",
            "an extension is non-trivial on at most 4 Delta fibres",
            n=mode.n,
            four_delta=format_rational(4 * Delta),
        ))

def consistency_check(E, ns, X, epsilon=surface.DEFAULT_EPSILON):
    findings = []
    _check_jumps(E, X, findings)

    if E.filtrable:
        _check_extension(E, ns, X, epsilon, findings)
    elif not isinstance(E.cover.horizontal, jacobian.Irreducible):
        findings.append(_finding(
            "horizontal-kind",
            "an unfiltrable bundle needs an irreducible bisection",
            horizontal=type(E.cover.horizontal).__name__,
        ))
    return findings

# constructors

def _attach_jumps(determinant, jumps, X):
    vertical = []
    for jump in jumps:
        determinant = _twist_by_fibre(determinant, X, jump.base_point, jump.length)
        vertical.append(jacobian.VerticalComponent(jump.base_point, jump.multiplicity))
    return determinant, tuple(vertical)

def _raise_on_findings(E, ns, X):
    findings = consistency_check(E, ns, X)
    if findings:
        raise DomainError("descriptor is inconsistent", {"findings": findings})
    return E

def filtrable_descriptor(X, ns, det_class, K1, splitting, K2=None, jumps=(), destab_class=None):
    """Bundle with destabilising bundles K1, K2 (K2 = None for coincident sections)"""
    coincident = K2 is None
    omega = surface.relative_dualising_sheaf(X)

    if coincident:
        # delta' = K1^2 (x) pi^*H_+^-1 (x) omega^-1
        reduced = surface.tensor(K1, K1)
        reduced = surface.p2_twist(reduced, base_shift=-splitting.n)
        other_section = K1.section
    else:
        # delta' = K1 (x) K2 (x) pi^*H_-^-1 (x) omega^-1
        reduced = surface.tensor(K1, K2)
        reduced = surface.p2_twist(reduced, base_shift=splitting.n)
        other_section = K2.section
    reduced = surface.tensor(reduced, surface.dual(omega))

    if coincident:
        Delta = Fraction(0)
    else:
        count = jacobian.section_intersections(K1.section, other_section, X)
        if count == jacobian.COINCIDENT:
            raise DomainError("K2 induces the same section as K1; pass K2=None")
        Delta = Fraction(count, 4)

    c2 = 2 * Delta + nslattice.square(ns, det_class) / 4
    if c2.denominator != 1:
        raise DomainError(
            "the jump-free second Chern class is not an integer",
            {"c2": format_rational(c2)},
        )

    jumps = tuple(jumps)
    determinant, vertical = _attach_jumps(reduced, jumps, X)
    extension = ExtensionData(K1.section, K1, other_section, splitting, destab_class)
    E = BundleDescriptor(
        determinant=determinant,
        det_class=det_class,
        c2=int(c2) + sum(jump.multiplicity for jump in jumps),
        cover=jacobian.SpectralCover(vertical, jacobian.Reducible(K1.section, other_section)),
        extension=extension,
        jumps=jumps,
    )
    return _raise_on_findings(E, ns, X)

def unfiltrable_descriptor(X, ns, determinant, det_class, c2, graph_section, jumps=()):
    jumps = tuple(jumps)
    vertical = tuple(jacobian.VerticalComponent(j.base_point, j.multiplicity) for j in jumps)
    E = BundleDescriptor(
        determinant=determinant,
        det_class=det_class,
        c2=c2,
        cover=jacobian.SpectralCover(vertical, jacobian.Irreducible(graph_section)),
        jumps=jumps,
    )
    return _raise_on_findings(E, ns, X)
