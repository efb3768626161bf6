"""Exact witness expectation values and the usefulness decision rule."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError, ValidationError
from .linalg import check_unitary
from .operators import WitnessOperator
from .states import DensityMatrix

IMAG_TOL = 1e-10
RANGE_TOL = 1e-9

PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
# i(|0><1| - |1><0|), matching the antisymmetric generator convention
PAULI_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)


@dataclass(frozen=True)
class WitnessVerdict:
    expectation: float
    threshold: float
    detected: bool
    defining_unitary: np.ndarray


def _check_pair(W: WitnessOperator, rho: DensityMatrix) -> None:
    if W.dim != rho.local_dim:
        raise ValidationError(f"witness acts on n={W.dim} but state has n={rho.local_dim}")


def _real_trace(A: np.ndarray, B: np.ndarray) -> float:
    val = np.einsum("ij,ji->", A, B)
    if abs(val.imag) > IMAG_TOL:
        raise ConsistencyError(f"Tr(A rho) has imaginary part {val.imag:.3e}")
    return float(val.real)


def expectation(W: WitnessOperator, rho: DensityMatrix) -> float:
    """``Tr(Gamma rho)``, checked to be real and inside ``[0, n]``."""
    _check_pair(W, rho)
    val = _real_trace(W.matrix, rho.matrix)
    if not -RANGE_TOL <= val <= W.dim + RANGE_TOL:
        raise ConsistencyError(f"<Gamma> = {val!r} outside [0, {W.dim}]")
    return val


def decide(W: WitnessOperator, rho: DensityMatrix, margin: float = 0.0) -> WitnessVerdict:
    """Detected iff ``<Gamma> > 1 + margin``.

    A positive verdict certifies ``F(rho) > 1/n``; a negative one only says
    this particular witness does not fire.
    """
    val = expectation(W, rho)
    threshold = 1.0
    return WitnessVerdict(val, threshold, val > threshold + margin, W.defining_unitary)


def qubit_witness_value(U, rho: DensityMatrix) -> float:
    """Two-qubit form ``<A_z x s_z + A_x x s_x - A_y x s_y>`` with ``A_w = U s_w U^dagger``.

    Equals ``2 <Gamma> - 1``, so the state is useful iff this exceeds 1.
    """
    if rho.local_dim != 2:
        raise ValidationError(f"two-qubit form needs n=2, got n={rho.local_dim}")
    U = check_unitary(U, 2)
    Ud = U.conj().T
    op = (
        np.kron(U @ PAULI_Z @ Ud, PAULI_Z)
        + np.kron(U @ PAULI_X @ Ud, PAULI_X)
        - np.kron(U @ PAULI_Y @ Ud, PAULI_Y)
    )
    return _real_trace(op, rho.matrix)


def fidelity_from_fef(F, n: int):
    """Optimal teleportation fidelity ``(nF + 1)/(n + 1)``.

    Works on floats and on ``fractions.Fraction`` inputs alike.
    """
    if n < 2 or int(n) != n:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    if not 0 <= F <= 1:
        raise DomainError(f"fully entangled fraction {F!r} outside [0, 1]")
    return (n * F + 1) / (n + 1)
