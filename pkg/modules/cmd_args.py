import sys
import os

from modules import config

VERSION = "1.0.0"

SUBCOMMANDS = ["surface-info", "stability", "moduli", "graph-image", "fibre", "m2", "psi"]

help_info = {
    "--config": {
        "desc": "problem file, or a directory of *.json problem files",
    },
    "--output": {
        "desc": "report format: json or text",
    },
    "--epsilon": {
        "desc": "tolerance for real parts of degrees (default 1e-9)",
    },
    "--wp-terms": {
        "desc": "lattice cut-off for the Weierstrass function (default 200)",
    },
    "--jobs": {
        "desc": "worker processes for a directory of problems",
    },
    "--quiet": {
        "desc": "don't print status lines to stderr",
    },
    "--version": {
        "desc": "print the version and exit",
    },
    "--help": {
        "desc": "print this help and exit",
    },
}

def print_help():
    print(f"smod v{VERSION}\n")
    print("Usage: smod.py " + "|".join(SUBCOMMANDS) + " --config FILE [options]\n")
    print("Command line arguments:")

    for cmd in help_info:
        desc = help_info[cmd]["desc"]
        print("  " + cmd.ljust(21, " ") + desc)

    print()

def usage_error(message):
    print("ERROR:    " + message, file=sys.stderr)
    sys.exit(2)

def _value(argv, arg_name, convert=str):
    if argv == []:
        usage_error(f"Missing argument for '{arg_name}'")
    raw = argv.pop(0)
    try:
        return convert(raw)
    except ValueError:
        usage_error(f"Invalid value '{raw}' for '{arg_name}'")

def parse_arguments(argv):
    args = {}

    while argv != []:
        arg_name = argv.pop(0)

        # problem file or directory
        if arg_name == "--config":
            args["config"] = _value(argv, arg_name)
            if not os.path.exists(args["config"]):
                usage_error(f"Problem file '{args['config']}' doesn't exist")
        # report format
        elif arg_name == "--output":
            args["output"] = _value(argv, arg_name)
            if args["output"] not in ["json", "text"]:
                usage_error("--output must be json or text")
        # tolerance on real degree parts
        elif arg_name == "--epsilon":
            args["epsilon"] = _value(argv, arg_name, float)
            if args["epsilon"] <= 0:
                usage_error("--epsilon must be positive")
        # Weierstrass lattice cut-off
        elif arg_name == "--wp-terms":
            args["wp-terms"] = _value(argv, arg_name, int)
            if args["wp-terms"] < 8:
                usage_error("--wp-terms must be at least 8")
        # batch worker processes
        elif arg_name == "--jobs":
            args["jobs"] = _value(argv, arg_name, int)
            if args["jobs"] < 1:
                usage_error("--jobs must be 1 or higher")
        elif arg_name == "--quiet":
            args["quiet"] = True
        elif arg_name in ["--version", "-v"]:
            print(f"smod v{VERSION}")
            sys.exit(0)
        elif arg_name in ["--help", "-h", "help"]:
            print_help()
            sys.exit(0)
        elif arg_name in SUBCOMMANDS:
            if "command" in args:
                usage_error(f"Only one subcommand is allowed, got '{args['command']}' and '{arg_name}'")
            args["command"] = arg_name
        else:
            usage_error(f"Invalid option '{arg_name}'")

    if "command" not in args:
        usage_error("Missing subcommand (" + ", ".join(SUBCOMMANDS) + ")")
    if "config" not in args:
        usage_error("Missing --config")

    return args

def get_default_args():
    default_args = []
    config_data = config.get_config()
    if "args" in config_data:
        args = config_data["args"]
        if isinstance(args, str):
            args = args.split(" ")

        for arg in args:
            if isinstance(arg, list):
                default_args += arg
            else:
                default_args += arg.split(" ")
    return default_args

def parse(argv):
    """Parse argv (without the program name), config defaults first"""
    return parse_arguments(get_default_args() + list(argv))
