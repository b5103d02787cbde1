# Stability of rank-2 bundle descriptors
#
# Filtrable bundles are decided twice: by comparing both destabilising degrees
# with deg(delta)/2, and by the closed-form criteria in nu, n and deg(omega).
# The two must agree.
from dataclasses import dataclass, field
from enum import Enum

from modules.errors import DomainError, ModelError, InvariantViolation
from modules.helpers import format_rational
from modules import surface
from modules import bundles
from modules import jacobian

class Route(Enum):
    DEGREES = "degrees"
    CLOSED_FORM = "closed-form"
    UNFILTRABLE = "unfiltrable"

@dataclass(frozen=True)
class Witness:
    degree: surface.Degree
    threshold: surface.Degree

@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    route: Route
    case: str = None
    witness: Witness = None
    warnings: tuple = field(default_factory=tuple)

def is_stable_unfiltrable(E):
    horizontal = E.cover.horizontal
    if not isinstance(horizontal, jacobian.Irreducible):
        raise DomainError(
            "the unfiltrable criterion needs an irreducible bisection",
            {"horizontal": type(horizontal).__name__},
        )
    return StabilityVerdict(stable=True, route=Route.UNFILTRABLE)

def _case_tag(ext):
    mode = ext.splitting
    if ext.coincident():
        if isinstance(mode, bundles.NontrivialOnFinitely):
            raise ModelError("coincident sections cannot carry a NontrivialOnFinitely extension")
        return "i" if isinstance(mode, bundles.SplitsEverywhere) else "ii"
    if isinstance(mode, bundles.SplitsOnFinitely):
        raise ModelError("distinct sections cannot carry a SplitsOnFinitely extension")
    return "iii"

def _reduced_determinant_degree(E, X):
    """deg delta - nu, checked against the determinant after removing every jump"""
    expected = surface.degree(E.determinant, X) - bundles.nu_invariant(E)
    reduced = surface.degree(bundles.remove_all_jumps(E, X).determinant, X)
    if not reduced.close_to(expected):
        raise InvariantViolation(
            "jump removal does not lower deg(delta) by nu",
            {"expected": expected.total(), "reduced": reduced.total()},
        )
    return reduced

def destabilising_degrees(E, X):
    if not E.filtrable:
        raise DomainError("unfiltrable bundles have no destabilising degrees")
    ext = E.extension
    case = _case_tag(ext)
    n = ext.splitting.n
    reduced = _reduced_determinant_degree(E, X)
    omega = surface.relative_dualising_degree(X)

    if case in ("i", "ii"):
        both = (reduced + n + omega).half()
        return both, both

    K1 = surface.degree(ext.destab_bundle, X)
    return K1, -K1 + reduced - n + omega

def _closed_form(E, X, case, epsilon):
    """Closed-form criteria: (stable, margins) with the slack of each deciding inequality"""
    nu = surface.as_degree(bundles.nu_invariant(E))
    n = E.extension.splitting.n
    omega = surface.relative_dualising_degree(X)

    if case in ("i", "ii"):
        margin = nu - omega - n
        return margin.sign(epsilon) > 0, [margin]

    half = surface.degree(E.determinant, X).half()
    K = surface.degree(E.extension.destab_bundle, X)
    low = half - nu - n + omega
    margins = [K - low, half - K]
    return all(m.sign(epsilon) > 0 for m in margins), margins

def stability_check(E, X, epsilon=surface.DEFAULT_EPSILON):
    if not E.filtrable:
        return is_stable_unfiltrable(E)

    case = _case_tag(E.extension)
    threshold = surface.degree(E.determinant, X).half()
    degrees = destabilising_degrees(E, X)
    by_degrees = all(d.compare(threshold, epsilon) < 0 for d in degrees)
    by_formula, margins = _closed_form(E, X, case, epsilon)

    if by_degrees != by_formula:
        raise InvariantViolation(
            "degree route and closed form disagree",
            {
                "case": case,
                "degrees": [d.total() for d in degrees],
                "threshold": threshold.total(),
            },
        )

    warnings = []
    # the tolerance decided a tie on the real part
    gaps = [d - threshold for d in degrees] + list(margins)
    if any(gap.sign(epsilon) == 0 and gap.real_part != 0 for gap in gaps):
        warnings.append("MarginWarning: a destabilising degree is within epsilon of deg(delta)/2")

    witness = None
    if not by_degrees:
        worst = max(degrees, key=lambda d: d.total())
        witness = Witness(degree=worst, threshold=threshold)

    return StabilityVerdict(
        stable=by_formula,
        route=Route.CLOSED_FORM,
        case=case,
        witness=witness,
        warnings=tuple(warnings),
    )

def corollary_unstable(E, ns, X):
    """Filtrable, jump-free bundles with trivial discriminant are unstable"""
    if not E.filtrable or E.jumps or bundles.discriminant(E, ns) != 0:
        raise DomainError(
            "needs a filtrable bundle without jumps and with trivial discriminant",
            {
                "filtrable": E.filtrable,
                "jumps": len(E.jumps),
                "discriminant": format_rational(bundles.discriminant(E, ns)),
            },
        )
    verdict = stability_check(E, X)
    if verdict.stable:
        raise InvariantViolation("a trivial-discriminant filtrable bundle was found stable")
    return True

def degree_congruent_mod_Z(a, b, epsilon=surface.DEFAULT_EPSILON):
    gap = a - b
    if abs(gap.real_part) <= epsilon:
        return gap.rational_part.denominator == 1
    # |alpha| can carry whole units of degree
    total = gap.total()
    return abs(total - round(total)) <= epsilon
