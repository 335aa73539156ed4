"""Matrix file format: UTF-8 JSON with explicit real/imaginary pairs.

Schema: ``{"dim": m, "entries": [[[re, im], ...], ...], "label": ...}``
with every float serialized to 17 significant digits, which round-trips
any double bit-exactly.  Parsed entries go through the usual construction
symmetrization, so hand-edited files with tiny asymmetry still load.
"""
from __future__ import annotations

import json
import os

import numpy as np

from .hpd import DomainError, HermitianMatrix, HpdMatrix


class MatrixFileError(ValueError):
    """A matrix file failed to parse or validate."""


def _fmt(x: float) -> str:
    if not np.isfinite(x):
        raise DomainError(f"non-finite entry {x!r} cannot be serialized")
    return format(float(x), ".17g")


def dumps_matrix(h: HermitianMatrix, label: str | None = None) -> str:
    m = h.dim
    rows = []
    for i in range(m):
        cells = ",".join(
            f"[{_fmt(h.mat[i, j].real)},{_fmt(h.mat[i, j].imag)}]" for j in range(m)
        )
        rows.append(f"    [{cells}]")
    body = ",\n".join(rows)
    label_line = f',\n  "label": {json.dumps(label)}' if label is not None else ""
    return f'{{\n  "dim": {m},\n  "entries": [\n{body}\n  ]{label_line}\n}}\n'


def write_matrix(path, h: HermitianMatrix, label: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(dumps_matrix(h, label))


def loads_matrix(text: str, require_hpd: bool = False):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise MatrixFileError("matrix file must be a JSON object")
    for key in ("dim", "entries"):
        if key not in doc:
            raise MatrixFileError(f"missing required field {key!r}")
    m = doc["dim"]
    if not isinstance(m, int) or m < 1:
        raise MatrixFileError(f"dim must be a positive integer, got {m!r}")
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != m:
        raise MatrixFileError(f"entries must be a list of {m} rows")
    mat = np.zeros((m, m), dtype=np.complex128)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != m:
            raise MatrixFileError(f"row {i} must be a list of {m} [re, im] pairs")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(x, (int, float)) for x in cell)
            ):
                raise MatrixFileError(f"entry ({i}, {j}) must be a [re, im] pair")
            mat[i, j] = complex(cell[0], cell[1])
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise MatrixFileError("label must be a string when present")
    try:
        h = HpdMatrix(mat) if require_hpd else HermitianMatrix(mat)
    except DomainError as exc:
        raise MatrixFileError(str(exc)) from None
    return h, label


def read_matrix(path, require_hpd: bool = False):
    if not os.path.exists(path):
        raise MatrixFileError(f"no such file: {path}")
    with open(path, encoding="utf-8") as fp:
        text = fp.read()
    try:
        return loads_matrix(text, require_hpd=require_hpd)
    except MatrixFileError as exc:
        raise MatrixFileError(f"{path}: {exc}") from None
