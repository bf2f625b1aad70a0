"""Checksummed plain-text checkpoint files for parameter arrays.

Format (stable across releases): a JSON document

    {
      "format": "cropq-checkpoint",
      "version": 1,
      "metadata": { ... caller-provided JSON ... },
      "arrays": {name: {"shape": [...], "data": [flat float64 values]}},
      "checksum": "sha256 hex of the canonical arrays encoding"
    }

Values are written with Python's shortest-round-trip float repr, so a
save/load cycle is bit-exact. The checksum covers the arrays block only;
metadata may be edited without invalidating it.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from ..errors import ParseError, ValidationError

FORMAT_NAME = "cropq-checkpoint"
FORMAT_VERSION = 1


def _canonical_arrays(arrays: dict) -> str:
    return json.dumps(arrays, sort_keys=True, separators=(",", ":"))


def save_arrays(path, arrays: dict[str, np.ndarray], metadata: dict | None = None) -> None:
    encoded = {}
    for name in sorted(arrays):
        arr = np.asarray(arrays[name], dtype=np.float64)
        encoded[name] = {"shape": list(arr.shape), "data": arr.reshape(-1).tolist()}
    checksum = hashlib.sha256(_canonical_arrays(encoded).encode()).hexdigest()
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "metadata": metadata or {},
        "arrays": encoded,
        "checksum": checksum,
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1))


def load_arrays(path):
    """Returns (arrays, metadata); verifies format and checksum."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a valid checkpoint: {exc}", path=str(path)) from exc
    if doc.get("format") != FORMAT_NAME:
        raise ParseError("unrecognized checkpoint format", path=str(path))
    if doc.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported checkpoint version {doc.get('version')}", path=str(path))
    encoded = doc.get("arrays", {})
    checksum = hashlib.sha256(_canonical_arrays(encoded).encode()).hexdigest()
    if checksum != doc.get("checksum"):
        raise ValidationError(f"checkpoint checksum mismatch in {path}")
    arrays = {}
    for name, spec in encoded.items():
        arr = np.asarray(spec["data"], dtype=np.float64).reshape(spec["shape"])
        arrays[name] = arr
    return arrays, doc.get("metadata", {})
