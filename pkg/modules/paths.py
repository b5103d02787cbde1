# Locations of the files shipped next to smod.py
import os

from modules.errors import SchemaError

BASE_PATH = os.path.realpath(os.path.join(__file__, "..", ".."))
SCHEMA_PATH = os.path.join(BASE_PATH, "schema")
SCHEMAS = ("problem", "report")

def config_file():
    return os.path.join(BASE_PATH, "config.json")

def schema(name):
    if name not in SCHEMAS:
        raise SchemaError("unknown schema", {"name": name, "known": list(SCHEMAS)})
    return os.path.join(SCHEMA_PATH, f"{name}.schema.json")
