#!/usr/bin/env python3

from concurrent.futures import ProcessPoolExecutor
from functools import partial
import glob
import sys
import os

from modules import cmd_args
from modules import commands
from modules import config
from modules import helpers
from modules import report
from modules.helpers import status

def problem_files(path):
    if os.path.isdir(path):
        return sorted(glob.glob(os.path.join(path, "*.json")))
    return [path]

def run_batch(files, args):
    worker = partial(commands.run_file, command=args["command"], cli_args=args)
    jobs = int(config.resolve_options(args)["jobs"])

    if jobs > 1 and len(files) > 1:
        status("BATCH", f"{len(files)} problems on {jobs} workers")
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            # map keeps the sorted file order
            return list(executor.map(worker, files))
    return [worker(f) for f in files]

def render_batch(results, output):
    if output == "json":
        return helpers.dumps({
            "results": [
                {"file": name, "exit_code": code, "report": payload}
                for name, code, payload, _ in results
            ]
        })
    blocks = []
    for name, code, payload, _ in results:
        blocks.append(f"## {name} (exit {code})\n" + report.render_text(payload))
    return "\n\n".join(blocks)

def main(argv):
    args = cmd_args.parse(argv)
    helpers.quiet = bool(args.get("quiet"))

    if not os.path.isdir(args["config"]):
        _, exit_code, payload, output = commands.run_file(args["config"], args["command"], args)
        print(report.render(payload, output))
        return exit_code

    files = problem_files(args["config"])
    if not files:
        status("ERROR", f"No *.json problem files in {args['config']}")
        return 2
    results = run_batch(files, args)
    print(render_batch(results, config.resolve_options(args)["output"]))
    return max(code for _, code, _, _ in results)

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
