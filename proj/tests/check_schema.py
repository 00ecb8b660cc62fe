"""Validate every --format json output of the hermrel binary against docs/schema.json."""
import json
import subprocess
import sys

import jsonschema

COMMANDS = {
    "field_info": ["field-info", "--field", "3^2", "--tables", "--element", "4"],
    "points": ["points", "--field", "2^2", "--matrix", "1 0 0 0 1 0 0 0 1"],
    "inflexions": ["inflexions", "--field", "3^2", "--matrix", "0 1 0 4 0 0 0 0 1"],
    "classification": ["classify", "--field", "3^2", "--matrix", "0 1 0 8 0 0 0 0 1"],
    "equivalence": ["equiv", "--field", "2^2", "--matrix", "0 1 0 2 0 0 0 0 1",
                    "--other", "0 1 0 3 0 0 0 0 1", "--bruteforce"],
    "table1": ["table1", "--field", "2^2"],
    "solve": ["solve", "kummer", "--field", "3^2", "--beta", "2"],
    "sweep": ["sweep", "props", "--field", "3^2", "--samples", "50", "--extension-samples", "2", "--timing"],
    "verify": ["verify-all", "--field", "2^2", "--samples", "500", "--timing"],
}


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as fh:
        schema = json.load(fh)
    jsonschema.Draft202012Validator.check_schema(schema)
    failures = 0
    for name, args in COMMANDS.items():
        out = subprocess.run([binary, *args, "--format", "json"], capture_output=True, text=True)
        if out.returncode != 0:
            print(f"FAIL {name}: exit {out.returncode}: {out.stderr.strip()}")
            failures += 1
            continue
        doc = json.loads(out.stdout)
        sub = dict(schema, **{"$ref": f"#/$defs/{name}"})
        sub.pop("anyOf")
        for target in (sub, schema):
            errors = list(jsonschema.Draft202012Validator(target).iter_errors(doc))
            if errors:
                print(f"FAIL {name}: {errors[0].message}")
                failures += 1
                break
        else:
            print(f"ok {name}")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
