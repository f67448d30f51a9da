"""JSON report envelope shared by all command-line subcommands."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from flint import arb

from . import __version__
from .knotdb import DATASET_VERSION
from .polyring import LaurentPoly

__all__ = ["ReportEnvelope", "ENVELOPE_SCHEMA", "to_jsonable", "validate_envelope"]

SCHEMA_VERSION = "1"

ENVELOPE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knotshrink report envelope",
    "type": "object",
    "required": ["command", "inputs", "result", "provenance"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "result": {},
        "provenance": {
            "type": "object",
            "required": ["tool", "version", "schema", "precision_bits", "dataset_version"],
            "properties": {
                "tool": {"const": "knotshrink"},
                "version": {"type": "string"},
                "schema": {"type": "string"},
                "precision_bits": {"type": "integer", "minimum": 16},
                "dataset_version": {"type": "string"},
            },
        },
    },
}


def to_jsonable(obj):
    """Plain JSON data from package objects; exact rationals become strings."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, LaurentPoly):
        return str(obj)
    if isinstance(obj, arb):
        return {"mid": float(obj.mid()), "rad": float(obj.rad())}
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def provenance(precision_bits: int) -> dict:
    return {
        "tool": "knotshrink",
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "precision_bits": precision_bits,
        "dataset_version": DATASET_VERSION,
    }


@dataclass
class ReportEnvelope:
    command: str
    inputs: dict
    result: Any
    provenance: dict = field(default_factory=lambda: provenance(192))

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": to_jsonable(self.inputs),
            "result": to_jsonable(self.result),
            "provenance": to_jsonable(self.provenance),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "ReportEnvelope":
        doc = json.loads(text)
        validate_envelope(doc)
        return cls(doc["command"], doc["inputs"], doc["result"], doc["provenance"])


def validate_envelope(doc) -> None:
    """Structural check against ENVELOPE_SCHEMA without a schema library."""
    if not isinstance(doc, dict):
        raise ValueError("envelope must be an object")
    keys = set(doc)
    required = set(ENVELOPE_SCHEMA["required"])
    if keys != required:
        raise ValueError(f"envelope keys {sorted(keys)} != {sorted(required)}")
    if not isinstance(doc["command"], str) or not isinstance(doc["inputs"], dict):
        raise ValueError("command must be a string and inputs an object")
    prov = doc["provenance"]
    for key in ENVELOPE_SCHEMA["properties"]["provenance"]["required"]:
        if key not in prov:
            raise ValueError(f"provenance lacks {key!r}")
    if prov["tool"] != "knotshrink" or not isinstance(prov["precision_bits"], int):
        raise ValueError("bad provenance")
