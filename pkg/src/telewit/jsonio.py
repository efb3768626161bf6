"""JSON file formats for states and unitaries.

Both use ``{"n": int, "matrix": [[[re, im], ...], ...]}``; a state matrix is
n^2 x n^2, a unitary n x n. Floats are written with ``repr`` precision, so
a write/read cycle is lossless.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .linalg import check_unitary
from .states import DensityMatrix, validate


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(rows) -> np.ndarray:
    try:
        M = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix is not a rectangular array of [re, im] pairs: {exc}") from None
    if M.ndim != 3 or M.shape[2] != 2:
        raise ValidationError(f"matrix must have shape (rows, cols, 2), got {M.shape}")
    return M[..., 0] + 1j * M[..., 1]


def _load(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "n" not in data or "matrix" not in data:
        raise ValidationError(f"{path} must hold an object with fields 'n' and 'matrix'")
    if not isinstance(data["n"], int):
        raise ValidationError(f"'n' must be an integer, got {data['n']!r}")
    return data


def state_to_dict(rho: DensityMatrix) -> dict:
    return {"n": rho.local_dim, "matrix": encode_matrix(rho.matrix)}


def state_from_dict(data: dict) -> DensityMatrix:
    return validate(decode_matrix(data["matrix"]), data["n"])


def write_state(rho: DensityMatrix, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(rho)) + "\n")


def read_state(path) -> DensityMatrix:
    return state_from_dict(_load(path))


def unitary_to_dict(U) -> dict:
    U = np.asarray(U, dtype=complex)
    return {"n": U.shape[0], "matrix": encode_matrix(U)}


def write_unitary(U, path) -> None:
    Path(path).write_text(json.dumps(unitary_to_dict(U)) + "\n")


def read_unitary(path) -> np.ndarray:
    data = _load(path)
    return check_unitary(decode_matrix(data["matrix"]), data["n"])
