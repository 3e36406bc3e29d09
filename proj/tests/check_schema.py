#!/usr/bin/env python3
"""Runs the CLI over the fixtures and samples and validates every JSON
report against schema/verdict.schema.json."""

import itertools
import json
import pathlib
import subprocess
import sys

import jsonschema


def main():
    binary, root = sys.argv[1], pathlib.Path(sys.argv[2])
    schema = json.loads((root / "schema" / "verdict.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    runs = [["fixtures", "verify", "--json"]]
    for fig in sorted((root / "fixtures").glob("fig*.sts")):
        names = [line.split()[1] for line in fig.read_text().splitlines() if line.startswith("sts ")]
        for a, b in itertools.permutations(names, 2):
            left, right = f"{fig}::{a}", f"{fig}::{b}"
            for notion in ("df", "ur", "uc"):
                runs.append(["check", "compat", "--notion", notion, "--json", left, right])
            for relation in ("strong", "branching", "weak", "trace", "simulation", "subtype"):
                runs.append(["check", "equiv", "--relation", relation, "--json", left, right])
        if len(names) >= 3:
            old, new, partner = (f"{fig}::{n}" for n in names[:3])
            base = ["check", "subst", "--old", old, "--new", new, "--partner", partner, "--json"]
            runs += [base, base + ["--relation", "subtype"], base + ["--via-compat"]]

    failures = 0
    for args in runs:
        proc = subprocess.run([binary, *args], capture_output=True, text=True)
        if proc.returncode not in (0, 1):
            print("exit", proc.returncode, " ".join(args), proc.stderr)
            failures += 1
            continue
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        for err in errors[:3]:
            print(" ".join(args), ":", err.message)
        failures += bool(errors)
    print(f"{len(runs) - failures}/{len(runs)} reports valid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
