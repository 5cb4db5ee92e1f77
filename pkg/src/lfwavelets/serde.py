"""JSON file helpers shared by the filter/signal/decomposition schemas.

Complex values are serialized as [re, im] pairs; Python float repr is
shortest-round-trip, so files preserve doubles exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .gf import FieldTable
from .indexing import FieldParams

__all__ = ["FileFormatError", "pairs_from_array", "array_from_pairs",
           "header_from_table", "table_from_header", "load_json", "dump_json"]


class FileFormatError(ValueError):
    """A structured file is malformed or violates its schema."""


def pairs_from_array(values) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex)]


def array_from_pairs(pairs, what: str) -> np.ndarray:
    try:
        out = np.array([complex(re, im) for re, im in pairs], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{what}: expected a list of [re, im] pairs") from exc
    return out


def header_from_table(table: FieldTable) -> dict:
    head = {"p": table.params.p, "c": table.params.c}
    if table.modulus:
        head["modulus"] = list(table.modulus)
    return head


def table_from_header(doc: dict, what: str) -> FieldTable:
    try:
        p = doc["p"]
        c = doc["c"]
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"{what}: missing field parameters p/c") from exc
    modulus = doc.get("modulus") or None
    try:
        return FieldTable(FieldParams(p, c), modulus)
    except ValueError as exc:
        raise FileFormatError(f"{what}: {exc}") from exc


def load_json(path, kind: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read {kind} file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise FileFormatError(f"{kind} file {path}: top level must be an object")
    if doc.get("kind", kind) != kind:
        raise FileFormatError(
            f"{path}: expected a {kind} file, found kind={doc.get('kind')!r}"
        )
    return doc


def dump_json(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
