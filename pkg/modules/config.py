import json

from modules import paths

DEFAULTS = {
    "epsilon": 1e-9,
    "wp_terms": 200,
    "output": "text",
    "jobs": 1,
    "args": [],
}

def get_config():
    try:
        with open(paths.config_file()) as f:
            config = json.load(f)
    except (OSError, ValueError):
        config = {}

    merged = dict(DEFAULTS)
    merged.update(config)
    return merged

def resolve_options(cli_args, problem_options=None):
    """Numeric options: command line > problem file > config.json > defaults"""
    options = {key: value for key, value in get_config().items() if key != "args"}

    for key, value in (problem_options or {}).items():
        options[key] = value

    for key in ["epsilon", "wp_terms", "output", "jobs"]:
        flag = key.replace("_", "-")
        if flag in cli_args:
            options[key] = cli_args[flag]

    return options
