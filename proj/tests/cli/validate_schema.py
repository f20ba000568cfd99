"""Runs the crn tool over the corpus and validates every document against the schema."""
import json
import pathlib
import subprocess
import sys

import jsonschema

exe, corpus, schema_path = sys.argv[1], pathlib.Path(sys.argv[2]), sys.argv[3]
schema = json.loads(pathlib.Path(schema_path).read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

seeds = {
    "acr": ("A=2,B=2", None), "birth_death": ("A=5", "60"), "cycle3": ("A=4", None),
    "dimer": ("A=6", None), "intro": ("A=3,B=3", None), "intro_rates": ("A=3,B=3", None),
    "isomer": ("A=4", None), "poisson": ("A=0", "60"), "rvb_multistable": ("A=2", "60"),
    "six_complex": ("A=0,B=0,C=1", "40"), "square": ("A=3,B=1", None), "stoch_rvb": ("A=0", "30"),
    "triangle": ("A=2,B=2", None),
}
runs = []
for name, (state, box) in seeds.items():
    path = str(corpus / f"{name}.crn")
    boxed = ["--box", box] if box else []
    runs += [
        ["parse", path],
        ["analyze", path, "--seed-state", state, *boxed],
        ["stationary", path, "--seed-state", state, "--allow-truncated", "--compare-poisson", *boxed],
        ["simulate", path, "--init", state, "--t-end", "20", "--seed", "3"],
        ["simulate", path, "--init", state, "--t-end", "20", "--seed", "3", "--compare", *boxed],
    ]
runs += [
    ["classify-state", str(corpus / "triangle.crn"), "--state", "A=1,B=1"],
    ["classify-state", str(corpus / "square.crn"), "--state", "A=1,B=2"],
    ["parse", "/nonexistent.crn"],
    ["classify-state", str(corpus / "isomer.crn"), "--state", "C=1"],
    ["stationary", str(corpus / "poisson.crn"), "--seed-state", "A=0", "--box", "30"],
]

failures = 0
for args in runs:
    out = subprocess.run([exe, *args], capture_output=True, text=True).stdout
    errors = list(validator.iter_errors(json.loads(out)))
    if errors:
        failures += 1
        print("invalid:", " ".join(args), "at", list(errors[0].absolute_path), errors[0].message[:200])
print(f"{len(runs)} documents, {failures} invalid")
sys.exit(1 if failures else 0)
