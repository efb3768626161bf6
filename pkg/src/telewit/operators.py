"""Generators, the maximally entangled state and the teleportation witness.

For a unitary U on the first subsystem the witness is

    Gamma = (1/n) [I x I + n sum_i A_i x l_i - sum_ij A_i x l_j]
            + (1/2) sum_{k<l} (A_kl x l_kl - A'_kl x l'_kl)

with ``A = U l U^dagger`` for each generator ``l``. Diagonal indices run over
``i = 1..n-1`` and off-diagonal pairs over ``0 <= k < l <= n-1``; with this
range ``Gamma == n (U x I)|psi+><psi+|(U^dagger x I)``.

Note the antisymmetric generators are ``i(|k><l| - |l><k|)``, so at n=2 the
"sigma_y" member is ``[[0, i], [-i, 0]]``, the negative of the usual Pauli Y.
Every witness term is quadratic in it, so the sign never matters.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import ValidationError
from .linalg import _frozen, check_unitary


def _check_dim(n: int) -> int:
    if int(n) != n or n < 2:
        raise ValidationError(f"local dimension must be an integer >= 2, got {n}")
    return int(n)


@dataclass(frozen=True)
class GeneratorSet:
    dim: int
    diagonal: tuple[np.ndarray, ...]
    symmetric: tuple[np.ndarray, ...]
    antisymmetric: tuple[np.ndarray, ...]
    pairs: tuple[tuple[int, int], ...]

    def all(self) -> tuple[np.ndarray, ...]:
        return self.diagonal + self.symmetric + self.antisymmetric

    def __len__(self) -> int:
        return len(self.diagonal) + len(self.symmetric) + len(self.antisymmetric)


@lru_cache(maxsize=None)
def generators(n: int) -> GeneratorSet:
    n = _check_dim(n)
    diagonal = []
    for i in range(1, n):
        D = np.zeros((n, n), dtype=complex)
        D[0, 0], D[i, i] = 1, -1
        diagonal.append(_frozen(D))
    pairs = tuple(combinations(range(n), 2))
    symmetric, antisymmetric = [], []
    for k, l in pairs:
        S = np.zeros((n, n), dtype=complex)
        S[k, l] = S[l, k] = 1
        symmetric.append(_frozen(S))
        A = np.zeros((n, n), dtype=complex)
        A[k, l], A[l, k] = 1j, -1j
        antisymmetric.append(_frozen(A))
    return GeneratorSet(n, tuple(diagonal), tuple(symmetric), tuple(antisymmetric), pairs)


def max_entangled_state(n: int) -> np.ndarray:
    """``|psi+> = (1/sqrt n) sum_i |ii>`` as a length n**2 vector."""
    n = _check_dim(n)
    psi = np.zeros(n * n, dtype=complex)
    psi[:: n + 1] = 1 / np.sqrt(n)
    return psi


def max_entangled_projector(n: int) -> np.ndarray:
    # built from exact 1/n entries rather than an outer product of 1/sqrt(n)
    n = _check_dim(n)
    e = np.zeros(n * n)
    e[:: n + 1] = 1
    return np.outer(e, e).astype(complex) / n


@dataclass(frozen=True)
class LocalTerm:
    coefficient: float
    left: np.ndarray
    right: np.ndarray
    label: str


@dataclass(frozen=True)
class LocalTermDecomposition:
    dim: int
    constant: float
    terms: tuple[LocalTerm, ...]

    def matrix(self) -> np.ndarray:
        n = self.dim
        M = self.constant * np.eye(n * n, dtype=complex)
        for t in self.terms:
            M += t.coefficient * np.kron(t.left, t.right)
        return M


@dataclass(frozen=True)
class WitnessOperator:
    dim: int
    defining_unitary: np.ndarray
    matrix: np.ndarray


def local_term_decomposition(n: int, U) -> LocalTermDecomposition:
    """Split the witness for `U` into a constant plus weighted ``A x l`` products.

    Coefficients are ``delta_ij - 1/n`` on ``A_i x l_j``, ``+1/2`` on
    ``A_kl x l_kl`` and ``-1/2`` on ``A'_kl x l'_kl``; the constant is ``1/n``.
    """
    n = _check_dim(n)
    U = check_unitary(U, n)
    Ud = U.conj().T
    G = generators(n)
    terms = []
    A_diag = [U @ g @ Ud for g in G.diagonal]
    for i, A in enumerate(A_diag, start=1):
        for j, lam in enumerate(G.diagonal, start=1):
            c = (1.0 if i == j else 0.0) - 1.0 / n
            terms.append(LocalTerm(c, A, lam, f"diag({i},{j})"))
    for (k, l), S, Asym in zip(G.pairs, G.symmetric, G.antisymmetric):
        terms.append(LocalTerm(0.5, U @ S @ Ud, S, f"sym({k},{l})"))
        terms.append(LocalTerm(-0.5, U @ Asym @ Ud, Asym, f"antisym({k},{l})"))
    return LocalTermDecomposition(n, 1.0 / n, tuple(terms))


def witness(n: int, U) -> WitnessOperator:
    """Assemble the witness matrix term by term from its local decomposition."""
    dec = local_term_decomposition(n, U)
    M = dec.matrix()
    return WitnessOperator(dec.dim, _frozen(np.array(U, dtype=complex)), _frozen(M))


def projector_form(n: int, U) -> np.ndarray:
    """``n (U x I)|psi+><psi+|(U^dagger x I)``, the closed form of the witness."""
    n = _check_dim(n)
    U = check_unitary(U, n)
    UI = np.kron(U, np.eye(n))
    return n * UI @ max_entangled_projector(n) @ UI.conj().T
