"""Structured-text (JSON) persistence for matrix product states.

Schema, version 1::

    {
      "format": "fmps-mps",
      "version": 1,
      "N": <int>,
      "bond_dims": [1, ..., 1],          # length N + 1
      "canonical": "none" | "left" | "right",
      "discarded_weight": <float>,
      "cores": [core_0, ..., core_{N-1}] # nested lists indexed [left][physical][right]
    }

Floats are written as IEEE-754 float64 in shortest round-trip decimal form
(at most 17 significant digits), so load(save(m)) reproduces every entry
bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

from ..exceptions import DimensionMismatch, IoFailure, MalformedFile, NonFinite, SchemaVersionMismatch
from ..mps import MatrixProductState

FORMAT_NAME = "fmps-mps"
SCHEMA_VERSION = 1


def mps_to_dict(mps: MatrixProductState) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": SCHEMA_VERSION,
        "N": mps.n_qubits,
        "bond_dims": mps.bond_dims,
        "canonical": mps.canonical,
        "discarded_weight": float(mps.discarded_weight),
        "cores": [core.tolist() for core in mps.cores],
    }


def mps_from_dict(doc: dict) -> MatrixProductState:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise MalformedFile(f"not an {FORMAT_NAME} document")
    version = doc.get("version")
    if str(version) != str(SCHEMA_VERSION):
        raise SchemaVersionMismatch(f"unsupported schema version {version!r}, expected {SCHEMA_VERSION}")
    try:
        cores = tuple(np.array(c, dtype=float) for c in doc["cores"])
        mps = MatrixProductState(cores, doc["canonical"], float(doc.get("discarded_weight", 0.0)))
    except (KeyError, TypeError, ValueError, DimensionMismatch, NonFinite) as exc:
        raise MalformedFile(f"invalid MPS document: {exc}") from exc
    if mps.n_qubits != doc.get("N") or mps.bond_dims != list(doc.get("bond_dims", [])):
        raise MalformedFile("declared N / bond_dims disagree with the cores")
    return mps


def save_mps(mps: MatrixProductState, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(mps_to_dict(mps), fh)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_mps(path) -> MatrixProductState:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: {exc}") from exc
    return mps_from_dict(doc)
