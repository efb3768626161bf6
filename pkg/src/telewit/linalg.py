"""Dense complex-matrix helpers: Hermitian eigendecomposition, Kronecker
products and an exponential-map chart on the unitary group.

Coordinates for :func:`unitary_from_params` use a fixed Hermitian basis of
the n x n matrices, in this order:

1. ``n - 1`` diagonal matrices ``|0><0| - |i><i|`` for ``i = 1..n-1``
2. symmetric ``|k><l| + |l><k|`` for ``k < l`` (lexicographic)
3. antisymmetric ``i(|k><l| - |l><k|)`` for ``k < l`` (lexicographic)
4. the identity

so that ``unitary_from_params(theta) = exp(i * sum_k theta[k] * basis[k])``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import NotHermitianError, ValidationError

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10


def as_square(M, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValidationError(f"{name} must be a non-empty square matrix, got shape {M.shape}")
    return M


def hermiticity_defect(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T)))


def hermitian_eig(M, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending real eigenvalues and a matrix whose columns are the
    corresponding orthonormal eigenvectors.

    Raises
    ------
    ValidationError
        If `M` is not square.
    NotHermitianError
        If ``max|M - M^dagger|`` exceeds `tol`.
    """
    M = as_square(M)
    defect = hermiticity_defect(M)
    if defect > tol:
        raise NotHermitianError(f"matrix is not Hermitian: max|M - M^dagger| = {defect:.3e} > tol {tol:.1e}")
    return np.linalg.eigh(M)


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def unitarity_defect(U: np.ndarray) -> float:
    U = np.asarray(U)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def check_unitary(U, n: int | None = None, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return `U` as a complex array after checking it is an (n x n) unitary."""
    U = as_square(U, "unitary")
    if n is not None and U.shape[0] != n:
        raise ValidationError(f"unitary has dimension {U.shape[0]}, expected {n}")
    defect = unitarity_defect(U)
    if defect > tol:
        raise ValidationError(f"matrix is not unitary: max|U^dagger U - I| = {defect:.3e} > tol {tol:.1e}")
    return U


def _frozen(M: np.ndarray) -> np.ndarray:
    M.setflags(write=False)
    return M


@lru_cache(maxsize=None)
def hermitian_basis(n: int) -> np.ndarray:
    """Stack of the n**2 Hermitian basis matrices, shape ``(n*n, n, n)``."""
    if n < 1:
        raise ValidationError(f"dimension must be positive, got {n}")
    mats = []
    for i in range(1, n):
        D = np.zeros((n, n), dtype=complex)
        D[0, 0], D[i, i] = 1, -1
        mats.append(D)
    pairs = list(combinations(range(n), 2))
    for k, l in pairs:
        S = np.zeros((n, n), dtype=complex)
        S[k, l] = S[l, k] = 1
        mats.append(S)
    for k, l in pairs:
        A = np.zeros((n, n), dtype=complex)
        A[k, l], A[l, k] = 1j, -1j
        mats.append(A)
    mats.append(np.eye(n, dtype=complex))
    return _frozen(np.array(mats))


def expm_hermitian(H: np.ndarray) -> np.ndarray:
    """``exp(iH)`` for Hermitian `H`, via its eigendecomposition."""
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * w)) @ V.conj().T


def unitary_from_params(theta, n: int | None = None) -> np.ndarray:
    """Map n**2 real coordinates to the unitary ``exp(i sum_k theta_k G_k)``.

    `n` defaults to ``sqrt(len(theta))``; if given, the coefficient count
    must equal ``n**2``.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    if n is None:
        n = int(round(np.sqrt(theta.size)))
    if n < 1 or theta.size != n * n:
        raise ValidationError(f"expected {n * n} coefficients for n={n}, got {theta.size}")
    H = np.tensordot(theta, hermitian_basis(n), axes=1)
    return expm_hermitian(H)
