"""Arrangement files: ``{"dimension": d, "normals": [[x0, ..., xd], ...]}``."""
from __future__ import annotations

import json
import os

import numpy as np

from .errors import ParseError
from .sphere_core import UNIT_TOL, GreatSphereArrangement


def parse_arrangement(text: str, source: str = "<string>") -> GreatSphereArrangement:
    if not text.strip():
        raise ParseError(f"{source}: file is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict) or "dimension" not in doc or "normals" not in doc:
        raise ParseError(f"{source}: expected an object with 'dimension' and 'normals'")
    d = doc["dimension"]
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ParseError(f"{source}: dimension must be a positive integer, got {d!r}")
    rows = doc["normals"]
    if not isinstance(rows, list):
        raise ParseError(f"{source}: 'normals' must be an array")
    normals = np.empty((len(rows), d + 1))
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d + 1:
            raise ParseError(f"{source}: normal {i} must have {d + 1} coordinates")
        try:
            normals[i] = [float(x) for x in row]
        except (TypeError, ValueError):
            raise ParseError(f"{source}: normal {i} has a non-numeric coordinate") from None
        norm = np.linalg.norm(normals[i])
        if not np.isfinite(norm) or abs(norm - 1.0) > UNIT_TOL:
            raise ParseError(f"{source}: normal {i} has norm {norm!r}, not 1 within {UNIT_TOL}")
        normals[i] /= norm
    return GreatSphereArrangement(d, normals)


def load_arrangement(path: str) -> GreatSphereArrangement:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse_arrangement(text, source=path)


def format_arrangement(arr: GreatSphereArrangement) -> str:
    lines = [json.dumps([float(x) for x in row]) for row in arr.normals]
    body = ",\n    ".join(lines)
    inner = f"\n    {body}\n  " if lines else ""
    return f'{{\n  "dimension": {arr.dimension},\n  "normals": [{inner}]\n}}\n'


def save_arrangement(arr: GreatSphereArrangement, path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_arrangement(arr))
