from fractions import Fraction
import cmath
import math

import pytest

from conftest import SQUARE, constant_section, line_bundle, hopf_surface, kodaira_surface
from modules import bundles
from modules import jacobian
from modules import nslattice
from modules import stability
from modules import surface
from modules import torus
from modules.errors import ModelError, DomainError
from modules.nslattice import NSLattice

EMPTY = NSLattice(0, ())
SMOOTH_POINTS = [0.25 + 0j, 0.5 + 0.5j, 2 + 0j, -1 + 1j]
SLOPES = [1 + 1j, 2 + 0j, 2 + 2j, 1 + 3j]

def random_alpha(rng):
    return cmath.rect(rng.uniform(0.3, 3.0), rng.uniform(0, 2 * math.pi))

def random_bundle(rng, X, section):
    coeffs = tuple(rng.randint(-3, 3) for _ in range(X.r))
    return line_bundle(X, rng.randint(-3, 3), random_alpha(rng), coeffs, section)

def random_section(rng):
    return constant_section(rng.random(), rng.random())

def random_jumps(rng, X):
    candidates = SMOOTH_POINTS + [fibre.base_point for fibre in X.multiple_fibres]
    jumps = []
    for base_point in rng.sample(candidates, rng.randint(0, 2)):
        sequence = rng.choice(bundles.jumping_sequences(rng.randint(1, 3)))
        index = X.fibre_index(base_point)
        marker = None if index is None else X.multiple_fibres[index].multiplicity
        jumps.append(bundles.JumpDescriptor(base_point, len(sequence), sequence, marker))
    return tuple(jumps)

def random_hopf(rng):
    if rng.random() < 0.5:
        return hopf_surface()
    return hopf_surface((surface.MultipleFibre(2, 0j), surface.MultipleFibre(3, 1 + 0j)))

def coincident_case(rng):
    X = random_hopf(rng) if rng.random() < 0.7 else kodaira_surface()
    K1 = random_bundle(rng, X, random_section(rng))
    if rng.random() < 0.5:
        splitting = bundles.SplitsEverywhere()
    else:
        splitting = bundles.SplitsOnFinitely(rng.randint(0, 3))
    E = bundles.filtrable_descriptor(X, EMPTY, (), K1, splitting, jumps=random_jumps(rng, X))
    margin = bundles.nu_invariant(E) - surface.relative_dualising_degree(X).rational_part - splitting.n
    return X, E, margin > 0

def distinct_case(rng):
    if rng.random() < 0.5:
        X = random_hopf(rng)
        first, second = random_section(rng), constant_section(0.5, 0.5)
        if torus.sections_equal(first, second):
            first = constant_section(0.1, 0.2)
        splitting = bundles.SplitsEverywhere()
    else:
        X = kodaira_surface()
        u = rng.choice(SLOPES)
        first = torus.AffineSection(u, torus.from_coordinates(rng.random(), rng.random(), SQUARE), SQUARE)
        second = random_section(rng)
        four_delta = round(abs(u) ** 2)
        if rng.random() < 0.3:
            splitting = bundles.SplitsEverywhere()
        else:
            splitting = bundles.NontrivialOnFinitely(rng.randint(0, four_delta))

    K1 = random_bundle(rng, X, first)
    K2 = random_bundle(rng, X, second)
    E = bundles.filtrable_descriptor(X, EMPTY, (), K1, splitting, K2=K2, jumps=random_jumps(rng, X))

    # jump-free destabilising degrees are deg K1 and deg K2
    threshold = surface.degree(E.determinant, X).half()
    d1, d2 = surface.degree(K1, X), surface.degree(K2, X)
    return X, E, d1 < threshold and d2 < threshold

def test_routes_agree_on_random_descriptors(rng):
    for _ in range(500):
        X, E, expected = coincident_case(rng) if rng.random() < 0.5 else distinct_case(rng)
        verdict = stability.stability_check(E, X)
        assert verdict.route == stability.Route.CLOSED_FORM
        assert verdict.stable == expected
        assert (verdict.witness is None) == verdict.stable

# distinct modulo Z[i], away from the multiple fibres at 0 and 1
JUMP_POINTS = [0.25 + 0j, 0.5 + 0.5j, 0.1 + 0.3j, 0.7 + 0.2j, 0.4 + 0.8j, 0.9 + 0.6j]

def test_more_jumps_never_destabilise(rng):
    for _ in range(60):
        if rng.random() < 0.5:
            X = random_hopf(rng) if rng.random() < 0.7 else kodaira_surface()
            K1, K2 = random_bundle(rng, X, random_section(rng)), None
            splitting = bundles.SplitsOnFinitely(rng.randint(0, 3)) if rng.random() < 0.5 else bundles.SplitsEverywhere()
        else:
            X = kodaira_surface()
            u = rng.choice(SLOPES)
            first = torus.AffineSection(u, torus.from_coordinates(rng.random(), rng.random(), SQUARE), SQUARE)
            K1, K2 = random_bundle(rng, X, first), random_bundle(rng, X, random_section(rng))
            splitting = bundles.NontrivialOnFinitely(rng.randint(0, round(abs(u) ** 2)))

        verdicts = []
        for count in range(len(JUMP_POINTS) + 1):
            jumps = tuple(bundles.JumpDescriptor(b, 1, (1,)) for b in JUMP_POINTS[:count])
            E = bundles.filtrable_descriptor(X, EMPTY, (), K1, splitting, K2=K2, jumps=jumps)
            assert bundles.nu_invariant(E) == count
            verdicts.append(stability.stability_check(E, X).stable)

        # once stable, stable for every larger nu
        assert verdicts == sorted(verdicts)
        if K2 is None:
            assert verdicts[-1]

def test_case_tags(hopf):
    K1 = line_bundle(hopf, section=constant_section(0.2, 0.3))
    K2 = line_bundle(hopf, section=constant_section(0.6, 0.3))
    everywhere = bundles.filtrable_descriptor(hopf, EMPTY, (), K1, bundles.SplitsEverywhere())
    finitely = bundles.filtrable_descriptor(hopf, EMPTY, (), K1, bundles.SplitsOnFinitely(1))
    distinct = bundles.filtrable_descriptor(hopf, EMPTY, (), K1, bundles.SplitsEverywhere(), K2=K2)
    assert stability.stability_check(everywhere, hopf).case == "i"
    assert stability.stability_check(finitely, hopf).case == "ii"
    assert stability.stability_check(distinct, hopf).case == "iii"

def test_mismatched_splitting_modes_are_model_errors(hopf):
    s = constant_section(0.2, 0.3)
    t = constant_section(0.6, 0.3)
    K1 = line_bundle(hopf, section=s)
    for other, mode in [(s, bundles.NontrivialOnFinitely(1)), (t, bundles.SplitsOnFinitely(1))]:
        E = bundles.BundleDescriptor(
            determinant=surface.tensor(K1, K1),
            det_class=(),
            c2=0,
            cover=jacobian.SpectralCover((), jacobian.Reducible(s, other)),
            extension=bundles.ExtensionData(s, K1, other, mode),
        )
        with pytest.raises(ModelError):
            stability.stability_check(E, hopf)

def test_a_single_jump_stabilises_a_coincident_extension(hopf):
    K1 = line_bundle(hopf, section=constant_section(0.2, 0.3))
    jump = bundles.JumpDescriptor(0.5 + 0j, 1, (1,))
    E = bundles.filtrable_descriptor(hopf, EMPTY, (), K1, bundles.SplitsEverywhere(), jumps=(jump,))
    verdict = stability.stability_check(E, hopf)
    assert verdict.stable
    assert verdict.case == "i"

    degrees = stability.destabilising_degrees(E, hopf)
    assert degrees[0] == degrees[1]
    assert degrees[0] < surface.degree(E.determinant, hopf).half()

def test_trivial_discriminant_is_unstable(rng):
    for _ in range(100):
        X = random_hopf(rng) if rng.random() < 0.6 else kodaira_surface()
        K1 = random_bundle(rng, X, random_section(rng))
        if rng.random() < 0.5:
            n = rng.randint(0, 3)
            splitting = bundles.SplitsOnFinitely(n) if n else bundles.SplitsEverywhere()
            E = bundles.filtrable_descriptor(X, EMPTY, (), K1, splitting)
        else:
            K2 = random_bundle(rng, X, constant_section(0.5, 0.5))
            if torus.sections_equal(K1.section, K2.section):
                continue
            E = bundles.filtrable_descriptor(X, EMPTY, (), K1, bundles.SplitsEverywhere(), K2=K2)
        assert bundles.discriminant(E, EMPTY) == 0
        assert stability.corollary_unstable(E, EMPTY, X)

def test_corollary_needs_its_hypotheses(hopf):
    K1 = line_bundle(hopf, section=constant_section(0.2, 0.3))
    jump = bundles.JumpDescriptor(0.5 + 0j, 1, (1,))
    E = bundles.filtrable_descriptor(hopf, EMPTY, (), K1, bundles.SplitsEverywhere(), jumps=(jump,))
    with pytest.raises(DomainError):
        stability.corollary_unstable(E, EMPTY, hopf)

def test_negative_c2_bundles_are_stable(rng):
    ns = NSLattice(1, ((-8,),))
    for _ in range(100):
        X = random_hopf(rng) if rng.random() < 0.7 else kodaira_surface()
        c2 = rng.choice([-2, -1])
        degree = rng.randint(1, 4)
        A = jacobian.PolynomialMap(tuple(complex(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(degree)) + (1,))
        E = bundles.unfiltrable_descriptor(X, ns, surface.trivial_bundle(X), (1,), c2, A)
        verdict = stability.stability_check(E, X)
        assert verdict.stable
        assert verdict.route == stability.Route.UNFILTRABLE
        assert not nslattice.filtrable_exists(ns, nslattice.ChernData((1,), c2))

def test_unfiltrable_criterion_needs_irreducible_cover(hopf):
    E = bundles.BundleDescriptor(
        determinant=surface.trivial_bundle(hopf),
        det_class=(),
        c2=1,
        cover=jacobian.SpectralCover((), jacobian.Reducible(constant_section(0, 0), constant_section(0.5, 0))),
    )
    with pytest.raises(DomainError):
        stability.is_stable_unfiltrable(E)

def test_margin_warning_on_real_part_ties(hopf):
    K1 = line_bundle(hopf, alpha=cmath.exp(1e-12), section=constant_section(0.2, 0.3))
    K2 = line_bundle(hopf, section=constant_section(0.6, 0.3))
    E = bundles.filtrable_descriptor(hopf, EMPTY, (), K1, bundles.SplitsEverywhere(), K2=K2)
    verdict = stability.stability_check(E, hopf)
    assert not verdict.stable
    assert any(w.startswith("MarginWarning") for w in verdict.warnings)

def test_degree_congruent_mod_Z():
    assert stability.degree_congruent_mod_Z(surface.Degree(Fraction(3, 2), 0.1), surface.Degree(Fraction(1, 2), 0.1))
    assert not stability.degree_congruent_mod_Z(surface.Degree(Fraction(1, 2)), surface.Degree(0))
    assert not stability.degree_congruent_mod_Z(surface.Degree(1, 0.5), surface.Degree(0, 0.0))
    # whole units carried by |alpha|
    assert stability.degree_congruent_mod_Z(surface.Degree(0, -1.0), surface.Degree(0))
    assert stability.degree_congruent_mod_Z(surface.Degree(Fraction(1, 2), 0.5), surface.Degree(0))
    assert not stability.degree_congruent_mod_Z(surface.Degree(0, -0.5), surface.Degree(0))
