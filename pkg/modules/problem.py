# Problem files: schema validation and decoding into model objects
import json

import jsonschema

from modules.errors import SchemaError, ModelError, DomainError, NeedsData
from modules.helpers import to_fraction, parse_complex, status
from modules import paths
from modules import surface
from modules import nslattice
from modules import jacobian
from modules import bundles
from modules import moduli
from modules import torus
from modules.weierstrass import INFINITY

_validator = None

def get_validator():
    global _validator
    if _validator is None:
        with open(paths.schema("problem")) as f:
            _validator = jsonschema.Draft7Validator(json.load(f))
    return _validator

def validate(problem):
    errors = sorted(get_validator().iter_errors(problem), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        first = errors[0]
        raise SchemaError(
            "problem file does not match the schema",
            {
                "path": "/" + "/".join(str(p) for p in first.absolute_path),
                "error": first.message,
                "count": len(errors),
            },
        )
    return problem

def load_problem(filename):
    try:
        with open(filename, encoding="utf-8") as f:
            problem = json.load(f)
    except OSError as e:
        raise SchemaError("cannot read problem file", {"file": filename, "error": str(e)})
    except ValueError as e:
        raise SchemaError("problem file is not valid JSON", {"file": filename, "error": str(e)})

    status("CONFIG", f"Loaded {filename}")
    return validate(problem)

def require(problem, key):
    if key not in problem:
        raise NeedsData(f"problem file has no '{key}' section", {"section": key})
    return problem[key]

# scalar values

def base_point(value):
    if isinstance(value, str):
        return value
    return parse_complex(value)

def p1_value(value):
    if value == "inf":
        return INFINITY
    return parse_complex(value)

def rational(value):
    return to_fraction(value)

def degree(data):
    return surface.Degree(rational(data.get("rational", 0)), float(data.get("real", 0.0)))

# surface and lattice

def build_surface(data):
    genus = data["base_genus"]
    base_curve = None
    if "base_tau" in data:
        base_curve = torus.EllipticCurve(parse_complex(data["base_tau"]))
    fibres = tuple(
        surface.MultipleFibre(f["multiplicity"], base_point(f["base_point"]))
        for f in data.get("multiple_fibres", [])
    )
    return surface.SurfaceModel(
        base_genus=genus,
        fibre=torus.EllipticCurve(parse_complex(data["fibre_tau"])),
        theta_degree=data["theta_degree"],
        tau=parse_complex(data["tau"]),
        multiple_fibres=fibres,
        base_curve=base_curve,
    )

def build_lattice(data):
    gram = data["gram"]
    return nslattice.NSLattice(len(gram), gram)

def point(data, curve):
    return torus.from_coordinates(rational(data["s"]), rational(data["t"]), curve)

def section(data, X):
    if "constant" in data:
        return torus.ConstantSection(point(data["constant"], X.fibre))
    if X.base_curve is None:
        raise ModelError("affine sections need an elliptic base curve")
    affine = data["affine"]
    return torus.AffineSection(parse_complex(affine["u"]), point(affine["c"], X.fibre), X.base_curve)

def line_bundle(data, X):
    coeffs = data.get("fibre_coeffs", [0] * X.r)
    if "section" in data:
        spectral = section(data["section"], X)
    else:
        spectral = surface.zero_section(X)
    return surface.LineBundleModel(
        data.get("base_chern", 0),
        parse_complex(data.get("alpha", 1.0)),
        tuple(coeffs),
        spectral,
    )

# graphs

def graph_map(data):
    if "samples" in data:
        samples = tuple((base_point(s["b"]), p1_value(s["w"])) for s in data["samples"])
        return jacobian.SampledMap(samples, data["degree"])
    return jacobian.PolynomialMap(
        tuple(parse_complex(c) for c in data["numerator"]),
        tuple(parse_complex(c) for c in data.get("denominator", [1])),
    )

def build_graph(data):
    vertical = tuple(
        jacobian.VerticalComponent(base_point(v["base_point"]), v["multiplicity"])
        for v in data.get("vertical", [])
    )
    return jacobian.GraphDivisor(vertical, graph_map(data["section"]))

def build_query(problem):
    graph = build_graph(require(problem, "graph"))
    data = problem.get("query", {})
    I = tuple(p1_value(v) for v in data["I"]) if "I" in data else None
    J = tuple(p1_value(v) for v in data["J"]) if "J" in data else None
    sigma1 = degree(data["sigma1_degree"]) if "sigma1_degree" in data else None
    return moduli.GraphQuery(graph, I=I, J=J, sigma1_degree=sigma1)

def jump_plan(problem):
    return [(base_point(p["base_point"]), tuple(p["sequence"])) for p in problem.get("jump_plan", [])]

# bundles

SPLITTINGS = {
    "SplitsEverywhere": bundles.SplitsEverywhere,
    "SplitsOnFinitely": bundles.SplitsOnFinitely,
    "NontrivialOnFinitely": bundles.NontrivialOnFinitely,
}

def splitting(data):
    return SPLITTINGS[data["mode"]](data.get("n", 0))

def jump(data, X):
    where = base_point(data["base_point"])
    if "over_multiple_fibre" in data:
        over = data["over_multiple_fibre"]
    else:
        index = X.fibre_index(where)
        over = None if index is None else X.multiple_fibres[index].multiplicity
    sequence = tuple(data["sequence"])
    return bundles.JumpDescriptor(where, len(sequence), sequence, over)

def _checked(E, ns, X, epsilon):
    findings = bundles.consistency_check(E, ns, X, epsilon)
    if findings:
        raise DomainError("descriptor is inconsistent", {"findings": findings})
    return E

def build_bundle(problem, X, ns, epsilon=surface.DEFAULT_EPSILON):
    """Descriptor from the bundle section: explicit when a determinant is given, constructed otherwise"""
    data = require(problem, "bundle")
    chern = problem.get("chern", {})
    det_class = tuple(data.get("det_class", chern.get("c1", [0] * ns.rank)))
    jumps = tuple(jump(j, X) for j in data.get("jumps", []))

    if "extension" not in data:
        if "graph_section" not in data:
            raise NeedsData("an unfiltrable bundle needs 'graph_section'", {"section": "bundle"})
        determinant = line_bundle(data["determinant"], X) if "determinant" in data else surface.trivial_bundle(X)
        c2 = data.get("c2", chern.get("c2"))
        if c2 is None:
            raise NeedsData("an unfiltrable bundle needs c2", {"section": "bundle"})
        return bundles.unfiltrable_descriptor(
            X, ns, determinant, det_class, c2, graph_map(data["graph_section"]), jumps,
        )

    ext = data["extension"]
    K1 = line_bundle(ext["K1"], X)
    K2 = line_bundle(ext["K2"], X) if "K2" in ext else None
    mode = splitting(ext["splitting"])
    destab_class = tuple(ext["destab_class"]) if "destab_class" in ext else None

    if "determinant" not in data:
        return bundles.filtrable_descriptor(X, ns, det_class, K1, mode, K2, jumps, destab_class)

    c2 = data.get("c2", chern.get("c2"))
    if c2 is None:
        raise NeedsData("an explicit bundle descriptor needs c2", {"section": "bundle"})
    other = K1.section if K2 is None else K2.section
    vertical = tuple(jacobian.VerticalComponent(j.base_point, j.multiplicity) for j in jumps)
    E = bundles.BundleDescriptor(
        determinant=line_bundle(data["determinant"], X),
        det_class=det_class,
        c2=c2,
        cover=jacobian.SpectralCover(vertical, jacobian.Reducible(K1.section, other)),
        extension=bundles.ExtensionData(K1.section, K1, other, mode, destab_class),
        jumps=jumps,
    )
    return _checked(E, ns, X, epsilon)

# moduli context

def build_context(problem, X, ns):
    chern = require(problem, "chern")
    if "c2" not in chern:
        raise NeedsData("the moduli space needs c2", {"section": "chern"})
    data = problem.get("delta", {})
    return moduli.build_context(
        X,
        ns,
        tuple(chern["c1"]),
        chern["c2"],
        delta_degree=degree(data["degree"]) if "degree" in data else None,
        delta_section=section(data["section"], X) if "section" in data else None,
        delta_class=tuple(data["class"]) if "class" in data else None,
    )
