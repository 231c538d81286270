"""Deterministic JSON/CSV persistence with schema validation.

JSON payloads are schema-validated before writing and serialized with sorted
keys; floats use Python's shortest round-trip repr (bit-exact on reload).
Wall-clock data lives only under the "metadata" key so reports compare equal
across reruns once that key is dropped.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import jsonschema

_SCHEMA = None


def report_schema() -> dict:
    global _SCHEMA
    if _SCHEMA is None:
        text = resources.files("sqgperiodic.schemas").joinpath("report.schema.json").read_text()
        _SCHEMA = json.loads(text)
    return _SCHEMA


def validate_report(obj: dict) -> None:
    jsonschema.validate(obj, report_schema())


def dump_report(obj: dict, path: str | Path) -> None:
    validate_report(obj)
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def load_report(path: str | Path) -> dict:
    obj = json.loads(Path(path).read_text())
    validate_report(obj)
    return obj


def strip_metadata(obj: dict) -> dict:
    return {k: v for k, v in obj.items() if k != "metadata"}


def write_csv(path: str | Path, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")
