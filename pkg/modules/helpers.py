# Helper functions
from fractions import Fraction
import json
import sys

quiet = False

def status(tag, message):
    if quiet and tag != "ERROR":
        return
    print((tag + ":").ljust(10) + message, file=sys.stderr)

def to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)

def format_rational(value):
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"

def format_real(value):
    value = float(value)
    if value == 0.0:
        return 0.0
    return float(format(value, ".12g"))

def format_complex(value):
    return {"re": format_real(value.real), "im": format_real(value.imag)}

def parse_complex(value):
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    return complex(value)

def dumps(payload):
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)

def same_base_point(a, b, tol=1e-9):
    if isinstance(a, str) or isinstance(b, str):
        return a == b
    return abs(complex(a) - complex(b)) <= tol

def format_base_point(point):
    if isinstance(point, str):
        return point
    return format_complex(complex(point))
