# Reports on the moduli spaces M_{delta, c2} of stable rank-2 bundles
from dataclasses import dataclass, replace
from functools import cached_property
from fractions import Fraction
import math

from modules.errors import ModelError, DomainError, NeedsData, NoPoissonStructure
from modules.helpers import format_rational, format_base_point, same_base_point
from modules import surface
from modules import nslattice
from modules import jacobian
from modules import bundles
from modules import stability
from modules import torus
from modules.weierstrass import DEFAULT_TERMS, is_infinity

UNRESOLVED_COPIES = "finite (unresolved count)"

@dataclass(frozen=True)
class ModuliContext:
    surface: surface.SurfaceModel
    ns: nslattice.NSLattice
    c1: tuple
    delta_class: tuple
    delta_degree: surface.Degree
    c2: int
    delta_section: object = None

    def __post_init__(self):
        object.__setattr__(self, "c1", tuple(self.c1))
        object.__setattr__(self, "delta_class", tuple(self.delta_class))
        if self.delta_section is None:
            object.__setattr__(self, "delta_section", surface.zero_section(self.surface))

        if any((d - c) % 2 for d, c in zip(self.delta_class, self.c1)):
            raise ModelError("delta class must lie in c1 + 2NS(X)", {"delta_class": list(self.delta_class)})
        if -nslattice.square(self.ns, self.delta_class) / 8 != self.m:
            raise ModelError(
                "delta class does not realise m(2, c1)",
                {"delta_class": list(self.delta_class), "m": format_rational(self.m)},
            )

    @cached_property
    def m(self):
        return nslattice.m_two(self.ns, self.c1)

    @property
    def Delta(self):
        return nslattice.discriminant_numeric(self.ns, nslattice.ChernData(self.delta_class, self.c2))

    def involution(self):
        return jacobian.Involution(self.delta_section)

def build_context(X, ns, c1, c2, delta_degree=None, delta_section=None, delta_class=None):
    if delta_class is None:
        delta_class = nslattice.select_delta_class(ns, c1)
    if delta_degree is None:
        delta_degree = surface.Degree(0, 0.0)
    return ModuliContext(X, ns, tuple(c1), tuple(delta_class), delta_degree, int(c2), delta_section)

@dataclass(frozen=True)
class GraphQuery:
    graph: jacobian.GraphDivisor
    I: tuple = None
    J: tuple = None
    sigma1_degree: surface.Degree = None

@dataclass(frozen=True)
class GraphImageResult:
    outcome: str
    reason: str = None

IN_IMAGE = "InImage"
NOT_IN_IMAGE = "NotInImage"
NEEDS_DATA = "NeedsData"

@dataclass(frozen=True)
class ModuliReport:
    empty: bool
    reason: str
    m: Fraction
    discriminant: Fraction
    expected_dim: Fraction
    smooth_everywhere: bool
    regular_locus_smooth: bool
    gamma_condition: tuple
    filtrable: bool
    unfiltrable_band: nslattice.AdmissibleRange
    dimension_check: dict
    poisson: dict = None
    audit: dict = None

# emptiness, dimension, smoothness

def _emptiness(ctx):
    m = ctx.m
    if ctx.c2 < -2 * m:
        return True, "c2 < -2 m(2, c1)"
    if m == 0 and ctx.c2 == 0:
        return True, "c2 = 0 with m(2, c1) = 0"
    return False, None

def _smoothness_slack(ctx):
    """c2 - c1(delta)^2 / 2 - (g - 1)"""
    return ctx.c2 - nslattice.square(ctx.ns, ctx.delta_class) / 2 - (ctx.surface.base_genus - 1)

def gamma_condition(ctx, gamma):
    return _smoothness_slack(ctx) > Fraction(gamma) / 4

def moduli_report(ctx, gammas=(), regular_over_D=True, h0_adE_on_D=None):
    X = ctx.surface
    empty, reason = _emptiness(ctx)
    Delta = ctx.Delta
    formula = nslattice.dimension_formula(ctx.ns, ctx.delta_class, ctx.c2)

    poisson = None
    if surface.poisson_exists(X) != surface.PoissonVerdict.NONE:
        poisson = poisson_report(ctx, regular_over_D, h0_adE_on_D)
    audit = None
    if X.r == 0 and X.base_genus <= 1:
        audit = integrable_audit(ctx)

    return ModuliReport(
        empty=empty,
        reason=reason,
        m=ctx.m,
        discriminant=Delta,
        expected_dim=8 * Delta,
        smooth_everywhere=X.base_genus <= 1 and X.r == 0,
        regular_locus_smooth=_smoothness_slack(ctx) > 0,
        gamma_condition=tuple(
            {"gamma": gamma, "holds": gamma_condition(ctx, gamma)} for gamma in gammas
        ),
        filtrable=nslattice.filtrable_exists(ctx.ns, nslattice.ChernData(ctx.delta_class, ctx.c2)),
        unfiltrable_band=nslattice.c2_admissible_range(ctx.ns, ctx.c1),
        dimension_check={
            "formula": formula,
            "eight_delta": 8 * Delta,
            "holds": formula == 8 * Delta,
        },
        poisson=poisson,
        audit=audit,
    )

# graph map

def _constant_value(section):
    if section.degree != 0:
        return None
    if isinstance(section, jacobian.SampledMap):
        return section.constant_value()
    return section(0j)

def _value_in(value, values, tolerance=1e-7):
    for candidate in values:
        if is_infinity(value) or is_infinity(candidate):
            if is_infinity(value) and is_infinity(candidate):
                return True
        elif abs(complex(value) - complex(candidate)) <= tolerance * max(1.0, abs(complex(value))):
            return True
    return False

def _congruent_to_half(ctx, degree, epsilon):
    return stability.degree_congruent_mod_Z(degree, ctx.delta_degree.half(), epsilon)

def _excluded_line(ctx, q, epsilon):
    """m = 0, c2 = 1: is the graph in B x I?"""
    graph = q.graph
    w = _constant_value(graph.section)
    if len(graph.vertical) != 1 or graph.vertical[0].multiplicity != 1 or w is None:
        return GraphImageResult(IN_IMAGE)
    if q.I is not None:
        if _value_in(w, q.I):
            return GraphImageResult(NOT_IN_IMAGE, "graph lies in B x I")
        return GraphImageResult(IN_IMAGE)
    if q.sigma1_degree is not None:
        if _congruent_to_half(ctx, q.sigma1_degree, epsilon):
            return GraphImageResult(NOT_IN_IMAGE, "graph lies in B x I")
        return GraphImageResult(IN_IMAGE)
    return GraphImageResult(NEEDS_DATA, "the set I (or sigma1_degree) for a fibre plus constant section graph")

def _excluded_section(ctx, q, epsilon, terms):
    """m = 1/4, c2 = 0: is the graph in J?"""
    graph = q.graph
    if graph.vertical:
        return GraphImageResult(IN_IMAGE)
    pullback = jacobian.graph_pullback(graph.section, ctx.involution(), ctx.surface.fibre, terms)
    if isinstance(pullback, jacobian.Irreducible):
        return GraphImageResult(IN_IMAGE)
    if isinstance(pullback, jacobian.Unknown):
        return GraphImageResult(NEEDS_DATA, f"irreducibility of the pulled back bisection: {pullback.reason}")
    if q.J is not None:
        w = _constant_value(graph.section)
        if w is not None and _value_in(w, q.J):
            return GraphImageResult(NOT_IN_IMAGE, "graph lies in J")
        return GraphImageResult(IN_IMAGE)
    if q.sigma1_degree is not None:
        if _congruent_to_half(ctx, q.sigma1_degree, epsilon):
            return GraphImageResult(NOT_IN_IMAGE, "graph lies in J")
        return GraphImageResult(IN_IMAGE)
    return GraphImageResult(NEEDS_DATA, "the set J (or sigma1_degree) for a reducible graph")

def graph_image_membership(ctx, q, epsilon=surface.DEFAULT_EPSILON, terms=DEFAULT_TERMS):
    if ctx.surface.r > 0:
        return GraphImageResult(
            NEEDS_DATA,
            "image of the graph map over surfaces with multiple fibres is not determined here",
        )
    m, c2 = ctx.m, ctx.c2
    if c2 < -2 * m or (m == 0 and c2 == 0):
        return GraphImageResult(NOT_IN_IMAGE, "moduli empty")
    # map degrees are non-negative, so the class is only checked for c2 >= 0
    if c2 >= 0 and not jacobian.numerical_class_check(q.graph, c2):
        raise DomainError(
            "graph is not numerically equivalent to eta_*(B_0) + c2 f",
            {"vertical": q.graph.vertical_total(), "degree": q.graph.section.degree, "c2": c2},
        )
    if m == 0:
        if c2 == 1:
            return _excluded_line(ctx, q, epsilon)
        return GraphImageResult(IN_IMAGE)
    if c2 == 0 and m == Fraction(1, 4):
        return _excluded_section(ctx, q, epsilon, terms)
    return GraphImageResult(IN_IMAGE)

def excluded_constants(ctx, alphas, epsilon=surface.DEFAULT_EPSILON, terms=DEFAULT_TERMS):
    """Values of I among the constants carried by L_alpha, alpha in the grid"""
    X = ctx.surface
    if not isinstance(ctx.delta_section, torus.ConstantSection):
        raise NeedsData(
            "excluded constants need a delta whose section is constant",
            {"delta_section": type(ctx.delta_section).__name__},
        )
    half = ctx.delta_degree.half()
    found = []
    for alpha in alphas:
        point = surface.flat_point(X, alpha)
        candidate = surface.degree(surface.flat_bundle(X, point), X)
        if not stability.degree_congruent_mod_Z(candidate, half, epsilon):
            continue
        # T* is identified with the fibre through the period coordinates
        point = torus.from_coordinates(point.s, point.t, X.fibre)
        found.append({"alpha": alpha, "value": jacobian.eta_project(ctx.involution(), None, point, terms)})
    return found

# fibres of the graph map

def fibre_describe(ctx, q, epsilon=surface.DEFAULT_EPSILON, terms=DEFAULT_TERMS):
    X = ctx.surface
    if q.graph.vertical:
        raise DomainError("graphs with vertical components are described by jump_fibre_describe")

    Delta = ctx.Delta
    pullback = jacobian.graph_pullback(q.graph.section, ctx.involution(), X.fibre, terms)
    if isinstance(pullback, jacobian.Unknown):
        return {"type": "Indeterminate", "reason": pullback.reason}
    if isinstance(pullback, jacobian.Irreducible):
        return {
            "type": "Prym",
            "dim": 4 * Delta + X.base_genus - 1,
            "copies": 1 if X.r == 0 else UNRESOLVED_COPIES,
        }

    if pullback.is_multiple():
        return {
            "type": "Empty",
            "reason": "coincident sections without jumps give unstable bundles",
        }

    # window with nu = 0 and n = 4 Delta, the widest admissible
    n = 4 * Delta
    if n.denominator != 1:
        return {"type": "Empty", "reason": "4 Delta is not an integer, so no bundle is filtrable"}
    half = ctx.delta_degree.half()
    low = half - n + surface.relative_dualising_degree(X)
    description = {
        "type": "ExtensionComponents",
        "window": {"low": low, "high": half},
    }
    if q.sigma1_degree is None:
        description["requirement"] = "regular on at least one coincidence fibre, or two when deg K = deg(delta)/2 mod Z"
        return description

    components = []
    warnings = []
    for deg in surface.p2_normalise(q.sigma1_degree, low, half, X, epsilon):
        E = _component_descriptor(ctx, pullback, deg, int(n))
        verdict = stability.stability_check(E, X, epsilon)
        warnings.extend(w for w in verdict.warnings if w not in warnings)
        if not verdict.stable:
            continue
        congruent = _congruent_to_half(ctx, deg, epsilon)
        components.append({
            "degree": deg,
            "requirement": "at least two" if congruent else "at least one",
        })
    description["components"] = components
    if warnings:
        description["warnings"] = warnings
    return description

def _bundle_of_degree(X, deg, section):
    """Line bundle with the given section, its real degree carried by a flat bundle"""
    whole = math.floor(deg.rational_part)
    rest = float(deg.rational_part - whole) + deg.real_part
    # deg L_alpha = -d t in the natural chart of T*
    point = torus.TorusPoint(0.0, -rest / X.theta_degree, surface.natural_fibre(X))
    return replace(surface.flat_bundle(X, point, whole), section=section)

def _component_descriptor(ctx, pullback, deg, n):
    """Jump-free extension of K2 by K1 with deg K1 = deg and det = delta, non-split over n fibres"""
    X = ctx.surface
    K1 = _bundle_of_degree(X, deg, pullback.s1)
    determinant = _bundle_of_degree(X, ctx.delta_degree, surface.add_sections(pullback.s1, pullback.s2))
    return bundles.BundleDescriptor(
        determinant=determinant,
        det_class=ctx.delta_class,
        c2=ctx.c2,
        cover=jacobian.SpectralCover((), pullback),
        extension=bundles.ExtensionData(pullback.s1, K1, pullback.s2, bundles.NontrivialOnFinitely(n)),
    )

def jump_fibre_describe(ctx, graph, plan):
    """Chains of Psi-fibre types; plan is a list of (base_point, jumping sequence)"""
    c2 = ctx.c2
    described = []
    for component in graph.vertical:
        sequence = None
        for base_point, candidate in plan:
            if same_base_point(base_point, component.base_point):
                sequence = tuple(candidate)
        if sequence is None:
            raise DomainError(
                "no jumping sequence for a vertical component",
                {"base_point": format_base_point(component.base_point)},
            )
        if sum(sequence) != component.multiplicity:
            raise DomainError(
                "jumping sequence must sum to the vertical multiplicity",
                {"sequence": list(sequence), "mu": component.multiplicity},
            )
        # validates the sequence
        bundles.JumpDescriptor(component.base_point, len(sequence), sequence)

        steps = []
        length = len(sequence)
        for k, h0 in enumerate(sequence):
            h1 = sequence[k + 1] if k + 1 < length else None
            l = length - 1 - k
            fibre = bundles.psi_fibre_classify(c2, h0, h1, l)
            steps.append({"c2": c2, "h0": h0, "h1": h1, "l": l, "fibre": fibre.symbol()})
            c2 -= h0
        described.append({
            "base_point": format_base_point(component.base_point),
            "sequence": list(sequence),
            "steps": steps,
        })
    return described

# Poisson structure and integrable system

def poisson_report(ctx, regular_over_D=True, h0_adE_on_D=None):
    X = ctx.surface
    verdict = surface.poisson_exists(X)
    if verdict == surface.PoissonVerdict.NONE:
        raise NoPoissonStructure(
            "the surface carries no Poisson structure",
            {"base_genus": X.base_genus, "multiple_fibres": X.r},
        )

    dim = 8 * ctx.Delta
    if verdict == surface.PoissonVerdict.SYMPLECTIC:
        return {"kind": "symplectic", "dim": dim, "rank": dim}

    if h0_adE_on_D is None and regular_over_D:
        # ad(E|_T) has one section on each regular fibre T_1, T_2
        h0_adE_on_D = 2
    formula_value = None if h0_adE_on_D is None else 4 * dim - h0_adE_on_D
    generic = 4 * dim - 2
    return {
        "kind": "degenerate",
        "dim": dim,
        "divisor": "D = T_1 + T_2",
        "formula": "4 dim M - h0(D, ad E|_D)",
        "formula_as_stated": True,
        "formula_value": formula_value,
        "generic_rank": generic,
        "regular_over_D": regular_over_D,
        "drop_locus": "bundles that are not regular over the fibres T_1 and T_2",
        "discrepancy": generic > dim or (formula_value is not None and formula_value > dim),
    }

def integrable_audit(ctx):
    X = ctx.surface
    if X.r > 0 or X.base_genus > 1:
        raise DomainError(
            "the graph map is an integrable system only for g <= 1 without multiple fibres",
            {"base_genus": X.base_genus, "multiple_fibres": X.r},
        )
    Delta = ctx.Delta
    g = X.base_genus
    dim = 8 * Delta
    fibre_dim = 4 * Delta + g - 1
    return {
        "dim_M": dim,
        "fibre_dim": fibre_dim,
        "base_dim": dim - fibre_dim,
        "lagrangian_balance": fibre_dim == dim / 2 if g == 1 else None,
    }
