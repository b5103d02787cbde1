# Subcommands: each takes a validated problem and resolved options and
# returns (payload, exit code)
from dataclasses import replace
import os

from modules.errors import SmodError, NeedsData
from modules.helpers import format_base_point, status
from modules import helpers
from modules import config
from modules import problem as problems
from modules import report
from modules import surface
from modules import nslattice
from modules import bundles
from modules import stability
from modules import moduli
from modules import weierstrass

def _terms(options):
    return int(options["wp_terms"])

def _epsilon(options):
    return float(options["epsilon"])

def _surface(problem):
    return problems.build_surface(problems.require(problem, "surface"))

def _lattice(problem):
    return problems.build_lattice(problems.require(problem, "ns"))

def _fibre_invariants(X, options):
    g2, g3 = weierstrass.invariants(X.fibre, _terms(options))
    residual = weierstrass.branch_residual(X.fibre, _terms(options))
    if residual > 1e-6 * max(1.0, abs(g2) ** 1.5):
        status("WARNING", f"branch values miss the cubic 4w^3 - g2 w - g3 by {residual:.3g}")
    return {"g2": g2, "g3": g3, "branch_residual": residual}

def cmd_surface_info(problem, options):
    X = _surface(problem)
    verdict = surface.poisson_exists(X)
    payload = {
        "command": "surface-info",
        "base_genus": X.base_genus,
        "theta_degree": X.theta_degree,
        "tau": complex(X.tau),
        "abs_tau": abs(complex(X.tau)),
        "fibre_tau": complex(X.fibre.lattice_tau),
        "multiple_fibres": [
            {"multiplicity": f.multiplicity, "base_point": format_base_point(f.base_point)}
            for f in X.multiple_fibres
        ],
        "omega_degree": surface.relative_dualising_degree(X),
        "p2_step": surface.p2_step(X),
        "anticanonical": surface.anticanonical_summary(X),
        "poisson": verdict.value,
        "fibre_invariants": _fibre_invariants(X, options),
    }
    return payload, 0

def cmd_stability(problem, options):
    epsilon = _epsilon(options)
    X = _surface(problem)
    ns = _lattice(problem)
    E = problems.build_bundle(problem, X, ns, epsilon)
    status("BUNDLE", "filtrable descriptor" if E.filtrable else "unfiltrable descriptor")

    verdict = stability.stability_check(E, X, epsilon)
    payload = {
        "command": "stability",
        "stable": verdict.stable,
        "route": verdict.route,
        "case": verdict.case,
        "witness": verdict.witness,
        "warnings": list(verdict.warnings),
        "filtrable": E.filtrable,
        "c2": E.c2,
        "discriminant": bundles.discriminant(E, ns),
        "nu": bundles.nu_invariant(E),
    }
    if E.filtrable:
        payload["splitting"] = bundles.splitting_name(E.extension.splitting)
        payload["destabilising_degrees"] = list(stability.destabilising_degrees(E, X))
        if not E.jumps and bundles.discriminant(E, ns) == 0:
            payload["trivial_discriminant"] = stability.corollary_unstable(E, ns, X)
    if "subsheaf" in problem:
        payload["subsheaf"] = _subsheaf(problem, E, X, epsilon)

    for warning in verdict.warnings:
        status("WARNING", warning)
    return payload, 0 if verdict.stable else 1

def _subsheaf(problem, E, X, epsilon):
    """Does the given line bundle map into E, and does it destabilise?"""
    L = problems.line_bundle(problem["subsheaf"], X)
    maps = bundles.maps_into(E, L, X, epsilon)
    deg = surface.degree(L, X)
    threshold = surface.degree(E.determinant, X).half()
    return {
        "maps_into": maps,
        "degree": deg,
        "destabilises": maps and deg.compare(threshold, epsilon) >= 0,
    }

def _describe_fibre(ctx, query, problem, options):
    if query.graph.vertical:
        plan = problems.jump_plan(problem)
        if not plan:
            raise NeedsData("graphs with vertical components need a 'jump_plan'", {"section": "jump_plan"})
        return {"type": "JumpTower", "components": moduli.jump_fibre_describe(ctx, query.graph, plan)}
    return moduli.fibre_describe(ctx, query, _epsilon(options), _terms(options))

def _with_excluded_constants(ctx, query, problem, options):
    """Fill I from the alpha grid when the problem gives no explicit set"""
    if "alpha_grid" not in problem:
        return query, None
    alphas = [helpers.parse_complex(a) for a in problem["alpha_grid"]]
    found = moduli.excluded_constants(ctx, alphas, _epsilon(options), _terms(options))
    status("GRID", f"{len(found)} of {len(alphas)} alpha values give constants of I")
    if query.I is None:
        query = replace(query, I=tuple(entry["value"] for entry in found))
    return query, found

def cmd_moduli(problem, options):
    X = _surface(problem)
    ns = _lattice(problem)
    ctx = problems.build_context(problem, X, ns)
    gammas = [problems.rational(g) for g in problem.get("gamma", [])]
    poisson = problem.get("poisson", {})

    result = moduli.moduli_report(
        ctx,
        gammas,
        regular_over_D=poisson.get("regular_over_D", True),
        h0_adE_on_D=poisson.get("h0_adE_on_D"),
    )
    payload = {
        "command": "moduli",
        "empty": result.empty,
        "reason": result.reason,
        "m": result.m,
        "delta_class": list(ctx.delta_class),
        "discriminant": result.discriminant,
        "expected_dim": result.expected_dim,
        "smoothness": {
            "smooth_everywhere": result.smooth_everywhere,
            "regular_locus_smooth": result.regular_locus_smooth,
            "gamma_condition": list(result.gamma_condition),
        },
        "filtrable": result.filtrable,
        "unfiltrable_band": {
            "c2_min": result.unfiltrable_band.c2_min,
            "low": result.unfiltrable_band.band_low,
            "high": result.unfiltrable_band.band_high,
            "integers": result.unfiltrable_band.band_integers(),
        },
        "dimension_check": result.dimension_check,
        "graph_image": None,
        "fibre": None,
        "poisson": result.poisson,
        "audit": result.audit,
    }

    if "graph" in problem:
        query = problems.build_query(problem)
        query, found = _with_excluded_constants(ctx, query, problem, options)
        image = moduli.graph_image_membership(ctx, query, _epsilon(options), _terms(options))
        payload["graph_image"] = {"result": image.outcome, "reason": image.reason}
        if not query.graph.vertical or "jump_plan" in problem:
            payload["fibre"] = _describe_fibre(ctx, query, problem, options)
        if found is not None:
            payload["excluded_constants"] = found
    return payload, 0

def cmd_graph_image(problem, options):
    X = _surface(problem)
    ns = _lattice(problem)
    ctx = problems.build_context(problem, X, ns)
    query = problems.build_query(problem)
    query, found = _with_excluded_constants(ctx, query, problem, options)

    image = moduli.graph_image_membership(ctx, query, _epsilon(options), _terms(options))
    payload = {
        "command": "graph-image",
        "result": image.outcome,
        "reason": image.reason,
        "m": ctx.m,
        "c2": ctx.c2,
    }
    if found is not None:
        payload["excluded_constants"] = found
    return payload, 3 if image.outcome == moduli.NEEDS_DATA else 0

def cmd_fibre(problem, options):
    X = _surface(problem)
    ns = _lattice(problem)
    ctx = problems.build_context(problem, X, ns)
    query = problems.build_query(problem)
    payload = {
        "command": "fibre",
        "m": ctx.m,
        "discriminant": ctx.Delta,
        "fibre": _describe_fibre(ctx, query, problem, options),
    }
    return payload, 0

def cmd_m2(problem, options):
    ns = _lattice(problem)
    chern = problems.require(problem, "chern")
    c1 = tuple(chern["c1"])
    admissible = nslattice.c2_admissible_range(ns, c1)
    delta_class = nslattice.select_delta_class(ns, c1)
    payload = {
        "command": "m2",
        "m": nslattice.m_two(ns, c1),
        "delta_class": list(delta_class),
        "admissible": {
            "c2_min": admissible.c2_min,
            "band_low": admissible.band_low,
            "band_high": admissible.band_high,
            "band_integers": admissible.band_integers(),
        },
    }
    if "c2" in chern:
        data = nslattice.ChernData(c1, chern["c2"])
        payload["discriminant"] = nslattice.discriminant_numeric(ns, data)
        payload["filtrable"] = nslattice.filtrable_exists(ns, data)
        payload["dimension_formula"] = nslattice.dimension_formula(ns, delta_class, chern["c2"])
    return payload, 0

def cmd_psi(problem, options):
    data = problems.require(problem, "psi")
    fibre = bundles.psi_fibre_classify(data["c2"], data["h0"], data.get("h1"), data["l"])
    payload = {
        "command": "psi",
        "input": {key: data.get(key) for key in ["c2", "h0", "h1", "l"]},
        "type": type(fibre).__name__,
        "fibre": fibre.symbol(),
    }
    return payload, 0

COMMANDS = {
    "surface-info": cmd_surface_info,
    "stability": cmd_stability,
    "moduli": cmd_moduli,
    "graph-image": cmd_graph_image,
    "fibre": cmd_fibre,
    "m2": cmd_m2,
    "psi": cmd_psi,
}

def run(command, problem, options):
    """Run one command; library errors become a JSON error object"""
    try:
        payload, exit_code = COMMANDS[command](problem, options)
    except SmodError as e:
        status("ERROR", e.message)
        return {"error": e.to_json()}, e.exit_code
    return payload, exit_code

def run_file(filename, command, cli_args):
    """Load, resolve options and run; returns (name, exit code, plain payload, output format)"""
    helpers.quiet = bool(cli_args.get("quiet"))
    name = os.path.basename(filename)
    try:
        loaded = problems.load_problem(filename)
    except SmodError as e:
        status("ERROR", e.message)
        options = config.resolve_options(cli_args)
        return name, e.exit_code, report.to_plain({"error": e.to_json()}), options["output"]

    options = config.resolve_options(cli_args, loaded.get("options"))
    payload, exit_code = run(command, loaded, options)
    return name, exit_code, report.to_plain(payload), options["output"]
