"""State files and report files.

A state file is one JSON document::

    {"kind": "pure", "dims": [2, 2], "data": [[re, im], ...]}
    {"kind": "density", "dims": [2, 2], "data": [[[re, im], ...], ...]}

Floats are written with 17 significant digits, which round-trips binary64
exactly.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from pathlib import Path

import numpy as np

from .tensor import HERMITIAN_TOL, DensityMatrix, PureState, StateError, SystemShape

log = logging.getLogger(__name__)

RENORMALIZE_TOL = 1e-6


class StateFileError(ValueError):
    """Malformed or invalid state file; the message names the offending field."""


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    s = format(x, ".17g")
    return s if any(c in s for c in ".e") else s + ".0"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written as ``%.17g``."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def complex_pairs(values) -> list:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in arr]
    return [complex_pairs(row) for row in arr]


def state_to_dict(state: PureState | DensityMatrix) -> dict:
    if isinstance(state, PureState):
        return {"kind": "pure", "dims": list(state.shape.dims), "data": complex_pairs(state.amplitudes)}
    return {"kind": "density", "dims": list(state.shape.dims), "data": complex_pairs(state.matrix)}


def write_state_file(state: PureState | DensityMatrix, path) -> None:
    Path(path).write_text(dumps(state_to_dict(state)) + "\n")


def _pair(v, where: str) -> complex:
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)):
        raise StateFileError(f"{where}: expected a [re, im] pair of numbers, got {v!r}")
    return complex(v[0], v[1])


def state_from_dict(doc, tol: float = HERMITIAN_TOL, source: str = "state") -> PureState | DensityMatrix:
    if not isinstance(doc, dict):
        raise StateFileError(f"{source}: top level must be an object")
    for key in ("kind", "dims", "data"):
        if key not in doc:
            raise StateFileError(f"{source}: missing field '{key}'")
    kind, dims, data = doc["kind"], doc["dims"], doc["data"]
    if kind not in ("pure", "density"):
        raise StateFileError(f"{source}: field 'kind' must be 'pure' or 'density', got {kind!r}")
    if not isinstance(dims, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise StateFileError(f"{source}: field 'dims' must be a list of integers")
    try:
        shape = SystemShape(dims)
    except StateError as exc:
        raise StateFileError(f"{source}: field 'dims': {exc}") from None
    d = shape.total_dim
    if not isinstance(data, list) or len(data) != d:
        raise StateFileError(f"{source}: field 'data' must have {d} entries for dims {dims}, got "
                             f"{len(data) if isinstance(data, list) else type(data).__name__}")
    if kind == "pure":
        amps = np.array([_pair(v, f"{source}: data[{i}]") for i, v in enumerate(data)])
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1) > RENORMALIZE_TOL:
            raise StateFileError(f"{source}: data: norm^2 = {norm2!r}, violates the unit-norm invariant")
        if abs(norm2 - 1) > tol:
            log.warning("%s: norm^2 = %r, renormalizing", source, norm2)
            amps = amps / math.sqrt(norm2)
        return PureState(shape, amps, tol=max(tol, 1e-12))
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != d:
            raise StateFileError(f"{source}: data[{i}] must be a row of {d} [re, im] pairs")
        rows.append([_pair(v, f"{source}: data[{i}][{j}]") for j, v in enumerate(row)])
    mat = np.array(rows)
    tr = float(np.trace(mat).real)
    if abs(tr - 1) > RENORMALIZE_TOL:
        raise StateFileError(f"{source}: data: trace = {tr!r}, violates the trace-one invariant")
    if abs(tr - 1) > tol:
        log.warning("%s: trace = %r, renormalizing", source, tr)
        mat = mat / tr
    try:
        return DensityMatrix(shape, mat, tol=tol)
    except StateError as exc:
        raise StateFileError(f"{source}: data: {exc}") from None


def parse_state_file(path, tol: float = HERMITIAN_TOL) -> PureState | DensityMatrix:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return state_from_dict(doc, tol, str(path))


def digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def serialize_report(report: dict, path) -> None:
    Path(path).write_text(dumps(report) + "\n")


def load_report(path) -> dict:
    return json.loads(Path(path).read_text())
