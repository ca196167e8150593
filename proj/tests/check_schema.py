"""Validate scenario files against the published schema.

Usage: check_schema.py SCHEMA FILE... [--invalid FILE...]
Files after --invalid must be rejected.
"""
import json
import sys

import jsonschema


def main(argv):
    schema = json.load(open(argv[0]))
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    expect_valid = True
    failures = 0
    for path in argv[1:]:
        if path == "--invalid":
            expect_valid = False
            continue
        errors = list(validator.iter_errors(json.load(open(path))))
        if bool(errors) == expect_valid:
            failures += 1
            print(f"{path}: expected {'valid' if expect_valid else 'invalid'}, got {len(errors)} errors")
            for error in errors[:5]:
                print("  ", error.message)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
