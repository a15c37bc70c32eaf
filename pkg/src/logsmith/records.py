"""JSON-lines helpers and the log record schema shared by reports and datasets."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

import jsonschema

LOG_RECORD_SCHEMA = {
    "type": "object",
    "required": ["file", "line", "level", "message", "variables", "block"],
    "properties": {
        "file": {"type": "string"},
        "line": {"type": "integer", "minimum": 1},
        "anchor_line": {"type": "integer", "minimum": 0},
        "level": {"enum": ["trace", "debug", "info", "warn", "error"]},
        "message": {"type": "string"},
        "variables": {"type": "array", "items": {"type": "string"}},
        "block": {
            "type": "object",
            "required": ["kind", "id"],
            "properties": {
                "kind": {"enum": ["Branch", "TryCatch", "Loop", "MethodDef"]},
                "id": {"type": "integer", "minimum": 1},
            },
        },
        "method": {"type": "string"},
        "flags": {"type": "array", "items": {"type": "string"}},
    },
}

_VALIDATOR = jsonschema.Draft7Validator(LOG_RECORD_SCHEMA)


class SchemaError(ValueError):
    pass


def validate_log_record(record: dict, where: str = "") -> None:
    errors = sorted(_VALIDATOR.iter_errors(record), key=lambda e: list(e.path))
    if errors:
        raise SchemaError(f"{where}: {errors[0].message}")


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


def write_jsonl(path: str | Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(dumps(rec) + "\n")


def read_jsonl(path: str | Path) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{number}: invalid JSON ({exc.msg})") from None
    return out


def read_log_records(path: str | Path) -> list[dict]:
    records = read_jsonl(path)
    for number, rec in enumerate(records, 1):
        validate_log_record(rec, f"{path}:{number}")
    return records
