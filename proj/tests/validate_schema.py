"""Runs every subcommand with --format json and validates the output against the shipped schema."""

import json
import subprocess
import sys

import jsonschema

COMMANDS = [
    ["decay-ensemble", "--n-atoms", "500", "--grid", "11"],
    ["decay-ensemble", "--n-atoms", "500", "--p-excited", "1", "--horizon", "40", "--premeasure", "--measure-survivors"],
    ["conditional-state", "--a0-re", "1", "--a1-im", "1"],
    ["ev", "--blocker", "a", "--shots", "1000"],
    ["ev"],
    ["master-check", "--n-traj", "200", "--tol", "1"],
]


def main() -> int:
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path, encoding="utf-8") as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for cmd in COMMANDS:
        proc = subprocess.run([binary, *cmd, "--format", "json"], capture_output=True, text=True, check=False)
        if proc.returncode != 0:
            print(f"FAIL {' '.join(cmd)}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        doc = json.loads(proc.stdout)
        errors = list(validator.iter_errors(doc))
        lengths = {len(v) for v in doc["data"].values()}
        if errors or len(lengths) != 1 or set(doc["columns"]) != set(doc["data"]):
            print(f"FAIL {' '.join(cmd)}: {[e.message for e in errors]} lengths={lengths}")
            failures += 1
        else:
            print(f"ok   {' '.join(cmd)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
