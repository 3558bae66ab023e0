"""Validate every shipped config against the published schema and make sure
the schema rejects the same minimal mistakes the C++ loader rejects."""
import json
import pathlib
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])
schema = json.loads((root / "schemas" / "experiment.schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

failures = 0
for path in sorted((root / "configs").glob("*.json")):
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    for e in errors:
        print(f"{path.name}: {e.message}")
    failures += bool(errors)

bad = [
    {"experiment": "lambda", "output": {"dir": "out"}},
    {"experiment": "lambda", "p": 2, "output": {"dir": "out"}, "bogus": 1},
    {"experiment": "reconstruct", "p": 2, "output": {"dir": "out"}},
    {"experiment": "convergence", "p": 2, "coefficient": {}, "probes": {"sigmas": [0.5]},
     "grid": {"points": 64, "half_width": 8}, "solve": {"T": 1, "dt": [0.1]}, "output": {"dir": "out"}},
]
for cfg in bad:
    if validator.is_valid(cfg):
        print("schema accepted an invalid config:", cfg)
        failures += 1

print("schema check:", "ok" if failures == 0 else f"{failures} problems")
sys.exit(1 if failures else 0)
