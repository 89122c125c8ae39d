"""Validate every JSON file in a run directory against the shipped schemas."""
import json
import sys
from pathlib import Path

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

FILES = {
    "config.json": "config.schema.json",
    "domain.json": "domain.schema.json",
    "certificate.json": "certificate.schema.json",
    "smoothed_certificate.json": "smoothed_certificate.schema.json",
    "levi_report.json": "levi_report.schema.json",
    "estimates.json": "estimates.schema.json",
}


def main(schema_dir, run_dir):
    schemas = {p.name: json.loads(p.read_text()) for p in Path(schema_dir).glob("*.schema.json")}
    registry = Registry().with_resources((name, Resource.from_contents(s)) for name, s in schemas.items())
    failed = 0
    for doc, schema in FILES.items():
        path = Path(run_dir) / doc
        if not path.exists():
            print(f"missing {doc}")
            failed += 1
            continue
        validator = Draft202012Validator(schemas[schema], registry=registry)
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        for e in errors:
            print(f"{doc}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
        failed += bool(errors)
        print(f"{doc}: {'ok' if not errors else 'invalid'}")
    unknown = {p.name for p in Path(run_dir).glob("*.json")} - FILES.keys()
    for name in sorted(unknown):
        print(f"no schema for {name}")
        failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
