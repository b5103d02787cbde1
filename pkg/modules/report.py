# Report serialisation: exact rationals as "p/q", reals with 12 digits
from dataclasses import is_dataclass, fields
from fractions import Fraction
from enum import Enum

from modules.helpers import format_rational, format_real, format_complex, dumps
from modules.surface import Degree
from modules.torus import TorusPoint
from modules.weierstrass import is_infinity

def to_plain(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, complex):
        return format_complex(value)
    if is_infinity(value):
        return "inf"
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Degree):
        return {
            "rational": format_rational(value.rational_part),
            "real": format_real(value.real_part),
            "total": format_real(value.total()),
        }
    if isinstance(value, TorusPoint):
        return {"s": format_real(value.s), "t": format_real(value.t)}
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if is_dataclass(value):
        return {f.name: to_plain(getattr(value, f.name)) for f in fields(value)}
    raise TypeError(f"cannot serialise {type(value).__name__}")

def render_json(payload):
    return dumps(to_plain(payload))

def _label(key):
    label = key.replace("_", " ")
    return label[:1].upper() + label[1:]

def _scalar(value):
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return f"{value['re']}{value['im']:+}i"
    if isinstance(value, dict) and "total" in value:
        return f"{value['rational']} + {value['real']} = {value['total']}"
    return str(value)

def _is_scalar(value):
    if isinstance(value, dict):
        return set(value) == {"re", "im"} or "total" in value
    if isinstance(value, list):
        return all(_is_scalar(item) for item in value)
    return True

def _lines(value, indent):
    pad = " " * indent
    lines = []
    for key in sorted(value):
        item = value[key]
        if isinstance(item, list) and _is_scalar(item):
            lines.append(f"{pad}{_label(key)}: " + (", ".join(_scalar(x) for x in item) or "-"))
        elif _is_scalar(item):
            lines.append(f"{pad}{_label(key)}: {_scalar(item)}")
        elif isinstance(item, dict):
            lines.append(f"{pad}{_label(key)}:")
            lines += _lines(item, indent + 2)
        else:
            lines.append(f"{pad}{_label(key)}:")
            for entry in item:
                if isinstance(entry, dict) and entry:
                    nested = _lines(entry, indent + 4)
                    lines.append(pad + "  - " + nested[0].lstrip())
                    lines += nested[1:]
                else:
                    lines.append(pad + "  - " + _scalar(entry))
    return lines

def render_text(payload):
    return "\n".join(_lines(to_plain(payload), 0))

def render(payload, output):
    if output == "json":
        return render_json(payload)
    return render_text(payload)
