from fractions import Fraction
import math

import pytest

from conftest import SQUARE
from modules import jacobian
from modules import moduli
from modules import stability
from modules import surface
from modules import torus
from modules.errors import ModelError, DomainError, NeedsData, NoPoissonStructure
from modules.nslattice import NSLattice
from modules.weierstrass import get_lattice

TERMS = 60
EMPTY = NSLattice(0, ())
RANK_ONE = {
    "m=0": (NSLattice(1, ((-2,),)), (0,)),
    "m=1/4": (NSLattice(1, ((-2,),)), (1,)),
    "m=1/2": (NSLattice(1, ((-4,),)), (1,)),
}

def context(X, c2, key=None, **kwargs):
    ns, c1 = RANK_ONE[key] if key else (EMPTY, ())
    return moduli.build_context(X, ns, c1, c2, **kwargs)

def graph(section, *vertical):
    return jacobian.GraphDivisor(tuple(jacobian.VerticalComponent(b, mu) for b, mu in vertical), section)

def constant_map(w):
    return jacobian.PolynomialMap((w,))

LINEAR = jacobian.PolynomialMap((0, 1))
QUADRATIC = jacobian.PolynomialMap((0, 0, 1))

# context

def test_context_checks_the_delta_class(hopf):
    ns, c1 = RANK_ONE["m=1/4"]
    assert context(hopf, 0, "m=1/4").delta_class == (-1,)
    assert context(hopf, 0, "m=1/4").m == Fraction(1, 4)
    with pytest.raises(ModelError):
        moduli.build_context(hopf, ns, c1, 0, delta_class=(0,))
    with pytest.raises(ModelError):
        moduli.build_context(hopf, ns, c1, 0, delta_class=(3,))

def test_discriminant_is_m_plus_half_c2(hopf):
    for key in RANK_ONE:
        for c2 in range(-1, 4):
            ctx = context(hopf, c2, key)
            assert ctx.Delta == ctx.m + Fraction(c2, 2)

# moduli report

def test_report_for_a_hopf_surface(hopf):
    report = moduli.moduli_report(context(hopf, 1), gammas=(0, 4, 8))
    assert not report.empty
    assert report.expected_dim == 4
    assert report.smooth_everywhere
    assert report.regular_locus_smooth
    assert [g["holds"] for g in report.gamma_condition] == [True, True, False]
    assert report.dimension_check["holds"]
    assert report.filtrable
    assert report.poisson["kind"] == "degenerate"
    assert report.audit == {"dim_M": 4, "fibre_dim": 1, "base_dim": 3, "lagrangian_balance": None}

def test_trivial_m_and_c2_is_empty(hopf):
    report = moduli.moduli_report(context(hopf, 0))
    assert report.empty
    assert report.reason == "c2 = 0 with m(2, c1) = 0"

def test_smoothness_boundary_for_higher_genus():
    X = surface.SurfaceModel(2, SQUARE, 1, 2.0)
    report = moduli.moduli_report(context(X, 1))
    assert not report.regular_locus_smooth
    assert not report.smooth_everywhere
    assert report.poisson is None
    assert report.audit is None

def test_emptiness_is_monotone(hopf):
    ns = NSLattice(1, ((-8,),))
    previous = True
    for c2 in range(-6, 4):
        report = moduli.moduli_report(moduli.build_context(hopf, ns, (1,), c2))
        assert report.empty == (c2 < -2)
        if report.empty:
            assert previous
            assert report.reason == "c2 < -2 m(2, c1)"
        previous = report.empty

# graph map image

def membership(X, c2, key, G, **query):
    ctx = context(X, c2, key)
    return moduli.graph_image_membership(ctx, moduli.GraphQuery(G, **query), terms=TERMS)

@pytest.mark.parametrize("key, c2, G, query, outcome, reason", [
    ("m=0", -1, graph(LINEAR), {}, "NotInImage", "moduli empty"),
    ("m=0", 0, graph(constant_map(1.5)), {}, "NotInImage", "moduli empty"),
    ("m=0", 1, graph(constant_map(1.5), (0.5, 1)), {"I": (1.5,)}, "NotInImage", "graph lies in B x I"),
    ("m=0", 1, graph(constant_map(1.5), (0.5, 1)), {"I": (2.5,)}, "InImage", None),
    ("m=0", 1, graph(constant_map(1.5), (0.5, 1)), {"sigma1_degree": surface.Degree(2)}, "NotInImage", "graph lies in B x I"),
    ("m=0", 1, graph(constant_map(1.5), (0.5, 1)), {"sigma1_degree": surface.Degree(Fraction(1, 2))}, "InImage", None),
    ("m=0", 1, graph(LINEAR), {}, "InImage", None),
    ("m=0", 2, graph(QUADRATIC), {}, "InImage", None),
    ("m=1/4", -1, graph(constant_map(1.5)), {}, "NotInImage", "moduli empty"),
    ("m=1/4", 0, graph(constant_map(1.5)), {"J": (1.5,)}, "NotInImage", "graph lies in J"),
    ("m=1/4", 0, graph(constant_map(1.5)), {"J": (4.0,)}, "InImage", None),
    ("m=1/4", 0, graph(constant_map(1.5)), {"sigma1_degree": surface.Degree(3)}, "NotInImage", "graph lies in J"),
    ("m=1/4", 0, graph(constant_map(1.5)), {"sigma1_degree": surface.Degree(Fraction(1, 2))}, "InImage", None),
    ("m=1/4", 1, graph(LINEAR), {}, "InImage", None),
    ("m=1/2", -1, graph(constant_map(1.5)), {}, "InImage", None),
    ("m=1/2", 0, graph(constant_map(1.5)), {}, "InImage", None),
    ("m=1/2", 2, graph(QUADRATIC), {}, "InImage", None),
])
def test_graph_image_grid(hopf, key, c2, G, query, outcome, reason):
    result = membership(hopf, c2, key, G, **query)
    assert result.outcome == outcome
    if reason is not None:
        assert result.reason == reason

def test_graph_image_needs_data(hopf, hopf_multiple):
    assert membership(hopf, 1, "m=0", graph(constant_map(1.5), (0.5, 1))).outcome == "NeedsData"
    assert membership(hopf, 0, "m=1/4", graph(constant_map(1.5))).outcome == "NeedsData"
    assert membership(hopf_multiple, 2, "m=0", graph(QUADRATIC)).outcome == "NeedsData"

def test_graph_image_rejects_wrong_class(hopf):
    with pytest.raises(DomainError):
        membership(hopf, 2, "m=0", graph(LINEAR))

def test_excluded_constants(hopf):
    ctx = context(hopf, 1, "m=0")
    found = moduli.excluded_constants(ctx, [-2 + 0j, math.sqrt(2) + 0j], terms=TERMS)
    assert len(found) == 1
    assert found[0]["alpha"] == -2
    assert found[0]["value"] == pytest.approx(6.875185818020376, rel=1e-8)

def test_excluded_constants_with_whole_units_of_degree(hopf):
    # |alpha| = 4 and 1/2 shift deg L_alpha by whole units only
    ctx = context(hopf, 1, "m=0")
    found = moduli.excluded_constants(ctx, [-4 + 0j, -0.5 + 0j], terms=TERMS)
    assert [entry["alpha"] for entry in found] == [-4, -0.5]
    for entry in found:
        assert entry["value"] == pytest.approx(6.875185818020376, rel=1e-8)

def test_excluded_constants_need_a_constant_delta_section(kodaira):
    section = torus.AffineSection(1 + 1j, torus.from_coordinates(0.1, 0.2, SQUARE), SQUARE)
    ctx = context(kodaira, 1, delta_section=section)
    with pytest.raises(NeedsData):
        moduli.excluded_constants(ctx, [-2 + 0j], terms=TERMS)

# fibres of the graph map

def test_irreducible_graph_gives_a_prym(hopf):
    ctx = context(hopf, 1)
    fibre = moduli.fibre_describe(ctx, moduli.GraphQuery(graph(LINEAR)), terms=TERMS)
    assert fibre == {"type": "Prym", "dim": 1, "copies": 1}

def test_branch_value_graph_gives_an_empty_fibre(hopf):
    e1 = get_lattice(SQUARE, TERMS).branch_values()[0]
    fibre = moduli.fibre_describe(context(hopf, 1), moduli.GraphQuery(graph(constant_map(e1))), terms=TERMS)
    assert fibre["type"] == "Empty"

def test_reducible_graph_gives_extension_components(hopf):
    ctx = context(hopf, 1)
    G = graph(constant_map(1.5))
    fibre = moduli.fibre_describe(ctx, moduli.GraphQuery(G), terms=TERMS)
    assert fibre["type"] == "ExtensionComponents"
    assert "requirement" in fibre
    assert fibre["window"]["low"] == surface.Degree(-2)

    fibre = moduli.fibre_describe(ctx, moduli.GraphQuery(G, sigma1_degree=surface.Degree(0)), terms=TERMS)
    assert [c["degree"] for c in fibre["components"]] == [surface.Degree(-1)]
    assert fibre["components"][0]["requirement"] == "at least two"

    fibre = moduli.fibre_describe(ctx, moduli.GraphQuery(G, sigma1_degree=surface.Degree(Fraction(1, 2))), terms=TERMS)
    assert [c["degree"].rational_part for c in fibre["components"]] == [Fraction(-3, 2), Fraction(-1, 2)]
    assert {c["requirement"] for c in fibre["components"]} == {"at least one"}

def test_extension_components_fill_a_wide_window(hopf):
    # Delta = 32, so the window (-128, 0) holds one translate per unit
    ctx = moduli.build_context(hopf, NSLattice(1, ((-256,),)), (1,), 0)
    assert ctx.Delta == 32
    q = moduli.GraphQuery(graph(constant_map(1.5)), sigma1_degree=surface.Degree(Fraction(1, 3)))
    fibre = moduli.fibre_describe(ctx, q, terms=TERMS)
    degrees = [c["degree"].rational_part for c in fibre["components"]]
    assert len(degrees) == 128
    assert degrees[0] == Fraction(-383, 3)
    assert degrees[-1] == Fraction(-2, 3)
    assert "warnings" not in fibre

def test_extension_components_are_stable_descriptors(hopf):
    ctx = context(hopf, 1)
    q = moduli.GraphQuery(graph(constant_map(1.5)), sigma1_degree=surface.Degree(Fraction(1, 2)))
    pullback = jacobian.graph_pullback(q.graph.section, ctx.involution(), hopf.fibre, TERMS)
    for deg in [surface.Degree(Fraction(-5, 2)), surface.Degree(Fraction(-3, 2)), surface.Degree(Fraction(1, 2))]:
        E = moduli._component_descriptor(ctx, pullback, deg, 2)
        assert surface.degree(E.extension.destab_bundle, hopf).total() == pytest.approx(deg.total())
        assert surface.degree(E.determinant, hopf).close_to(ctx.delta_degree)
        verdict = stability.stability_check(E, hopf)
        assert verdict.case == "iii"
        assert verdict.stable == (deg.rational_part == Fraction(-3, 2))

def test_prym_and_base_dimensions_add_up(hopf):
    for key in [None, *RANK_ONE]:
        for c2 in range(1, 4):
            ctx = context(hopf, c2, key)
            report = moduli.moduli_report(ctx)
            fibre = moduli.fibre_describe(ctx, moduli.GraphQuery(graph(LINEAR)), terms=TERMS)
            assert fibre["type"] == "Prym"
            assert fibre["dim"] + report.audit["base_dim"] == report.expected_dim

def test_sampled_graph_is_indeterminate(hopf):
    A = jacobian.SampledMap(((0j, 1), (0.5 + 0j, 2)), 1)
    fibre = moduli.fibre_describe(context(hopf, 1), moduli.GraphQuery(graph(A)), terms=TERMS)
    assert fibre["type"] == "Indeterminate"

def test_fibre_describe_rejects_vertical_components(hopf):
    with pytest.raises(DomainError):
        moduli.fibre_describe(context(hopf, 1), moduli.GraphQuery(graph(constant_map(1.5), (0.5, 1))), terms=TERMS)

def test_jump_fibre_chain(hopf):
    ctx = context(hopf, 3)
    G = graph(constant_map(1.5), (0.5, 3))
    described = moduli.jump_fibre_describe(ctx, G, [(0.5 + 0j, [2, 1])])
    steps = described[0]["steps"]
    assert [step["fibre"] for step in steps] == ["Pic^{-2}(T) x Aut", "Pic^{-1}(T)"]
    assert [step["c2"] for step in steps] == [3, 1]

    single = moduli.jump_fibre_describe(ctx, graph(constant_map(1.5), (0.5, 1)), [(0.5 + 0j, [1])])
    assert [step["fibre"] for step in single[0]["steps"]] == ["Pic^{-3}(T)"]

def test_jump_fibre_errors(hopf):
    ctx = context(hopf, 3)
    G = graph(constant_map(1.5), (0.5, 3))
    with pytest.raises(ModelError):
        moduli.jump_fibre_describe(ctx, G, [(0.5 + 0j, [1, 2])])
    with pytest.raises(DomainError):
        moduli.jump_fibre_describe(ctx, G, [(0.5 + 0j, [2])])
    with pytest.raises(DomainError):
        moduli.jump_fibre_describe(ctx, G, [])

# Poisson structure and integrable system

def test_symplectic_poisson_report(kodaira):
    report = moduli.poisson_report(context(kodaira, 2))
    assert report == {"kind": "symplectic", "dim": 8, "rank": 8}

def test_degenerate_poisson_report(hopf):
    report = moduli.poisson_report(context(hopf, 1))
    assert report["kind"] == "degenerate"
    assert report["generic_rank"] == 14
    assert report["formula_value"] == 14
    assert report["discrepancy"]

    assert moduli.poisson_report(context(hopf, 1), regular_over_D=False)["formula_value"] is None
    assert moduli.poisson_report(context(hopf, 1), h0_adE_on_D=3)["formula_value"] == 13

def test_no_poisson_structure_with_multiple_fibres(hopf_multiple):
    with pytest.raises(NoPoissonStructure):
        moduli.poisson_report(context(hopf_multiple, 1))

def test_integrable_audit(kodaira, hopf, hopf_multiple):
    assert moduli.integrable_audit(context(kodaira, 2)) == {
        "dim_M": 8, "fibre_dim": 4, "base_dim": 4, "lagrangian_balance": True,
    }
    for c2 in range(1, 11):
        audit = moduli.integrable_audit(context(kodaira, c2))
        assert audit["fibre_dim"] == audit["dim_M"] / 2
        assert audit["lagrangian_balance"]
    assert moduli.integrable_audit(context(hopf, 1))["fibre_dim"] == 1
    with pytest.raises(DomainError):
        moduli.integrable_audit(context(hopf_multiple, 1))
