"""Bipartite density matrices on C^n x C^n: validation, named families and
seeded random ensembles."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NotHermitianError, NotPositiveError, TraceError, ValidationError
from .linalg import _frozen, hermiticity_defect
from .operators import _check_dim, max_entangled_projector

STATE_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    local_dim: int
    matrix: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def validate(M, n: int, tol: float = STATE_TOL) -> DensityMatrix:
    """Check `M` is a density matrix on C^n x C^n and wrap it.

    Each failed invariant raises its own exception type, with the size of
    the violation in the message.
    """
    M = np.array(M, dtype=complex)
    d = n * n
    if M.shape != (d, d):
        raise ValidationError(f"expected a {d}x{d} matrix for n={n}, got shape {M.shape}")
    herm = hermiticity_defect(M)
    if herm > tol:
        raise NotHermitianError(f"state is not Hermitian: max|rho - rho^dagger| = {herm:.3e} > {tol:.1e}")
    tr = np.trace(M)
    if abs(tr - 1) > tol:
        raise TraceError(f"state trace is {tr.real:.12g}{tr.imag:+.3g}j, expected 1 within {tol:.1e}")
    lo = float(np.linalg.eigvalsh(M)[0])
    if lo < -tol:
        raise NotPositiveError(f"state is not positive semidefinite: min eigenvalue = {lo:.6e} < -{tol:.1e}")
    return DensityMatrix(n, _frozen(M))


def _bracket(name: str, value: float, lo: float, hi: float) -> float:
    value = float(value)
    if not lo <= value <= hi:
        raise DomainError(f"{name}={value!r} outside [{lo:.6g}, {hi:.6g}]")
    return value


def _phi_projector() -> np.ndarray:
    # |phi><phi| with phi = (|01> + |10>)/sqrt2, entries kept exact
    P = np.zeros((4, 4), dtype=complex)
    P[1:3, 1:3] = 0.5
    return P


def example_state(a: float) -> DensityMatrix:
    """``a|phi><phi| + (1-a)|11><11|`` with ``|phi> = (|01> + |10>)/sqrt2``."""
    a = _bracket("a", a, 0.0, 1.0)
    M = a * _phi_projector()
    M[3, 3] += 1 - a
    return validate(M, 2)


def isotropic(n: int, p: float) -> DensityMatrix:
    """``p|psi+><psi+| + (1-p) I/n^2``, PSD for ``-1/(n^2-1) <= p <= 1``."""
    d = _check_dim(n) ** 2
    p = _bracket("p", p, -1.0 / (d - 1), 1.0)
    M = p * max_entangled_projector(n) + (1 - p) * np.eye(d) / d
    return validate(M, n)


def werner_qubit(p: float) -> DensityMatrix:
    """``p|psi-><psi-| + (1-p) I/4`` with the singlet ``(|01> - |10>)/sqrt2``."""
    p = _bracket("p", p, 0.0, 1.0)
    singlet = np.zeros((4, 4), dtype=complex)
    singlet[1:3, 1:3] = [[0.5, -0.5], [-0.5, 0.5]]
    return validate(p * singlet + (1 - p) * np.eye(4) / 4, 2)


def pure_state(vector, n: int) -> DensityMatrix:
    v = np.asarray(vector, dtype=complex).ravel()
    if v.size != n * n:
        raise ValidationError(f"state vector needs {n * n} amplitudes for n={n}, got {v.size}")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise DomainError("state vector is zero")
    v = v / norm
    return validate(np.outer(v, v.conj()), n)


def product_state(rho_a, rho_b) -> DensityMatrix:
    rho_a, rho_b = np.asarray(rho_a, dtype=complex), np.asarray(rho_b, dtype=complex)
    if rho_a.shape != rho_b.shape:
        raise ValidationError(f"local states differ in shape: {rho_a.shape} vs {rho_b.shape}")
    return validate(np.kron(rho_a, rho_b), rho_a.shape[0])


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_local_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Hilbert-Schmidt random n x n density matrix (plain array)."""
    G = _ginibre(rng, (n, n))
    M = G @ G.conj().T
    return M / np.trace(M).real


def random_mixed(n: int, rank: int | None = None, seed=0) -> DensityMatrix:
    """Ginibre-induced random state ``G G^dagger / tr``, G of shape (n^2, rank).

    `rank` defaults to n^2, which gives the Hilbert-Schmidt measure.
    """
    d = _check_dim(n) ** 2
    rank = d if rank is None else rank
    if int(rank) != rank or not 1 <= rank <= d:
        raise DomainError(f"rank={rank!r} outside [1, {d}]")
    rng = np.random.default_rng(seed)
    G = _ginibre(rng, (d, int(rank)))
    M = G @ G.conj().T
    M = (M + M.conj().T) / 2
    return validate(M / np.trace(M).real, n)


def random_haar_unitary(n: int, seed=0) -> np.ndarray:
    """Haar-random n x n unitary from QR of a seeded Ginibre matrix.

    Columns of Q are rephased by ``r_ii/|r_ii|`` so that the factorisation is
    unique and the result is Haar distributed.
    """
    if n < 1:
        raise ValidationError(f"dimension must be positive, got {n}")
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(_ginibre(rng, (n, n)))
    d = np.diag(R)
    return Q * (d / np.abs(d))


FAMILIES = ("example", "isotropic", "werner_qubit", "pure", "random_mixed")


@dataclass(frozen=True)
class StateFamilySpec:
    """Recipe for one of the named state families.

    ``params`` keys per family: example ``a``; isotropic ``n, p``;
    werner_qubit ``p``; pure ``n`` and optional ``vector`` (seeded Haar
    vector otherwise); random_mixed ``n`` and optional ``rank``.
    """

    family: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def build(self) -> DensityMatrix:
        p = self.params
        seed = 0 if self.seed is None else self.seed
        try:
            if self.family == "example":
                return example_state(p["a"])
            if self.family == "isotropic":
                return isotropic(int(p["n"]), p["p"])
            if self.family == "werner_qubit":
                return werner_qubit(p["p"])
            if self.family == "pure":
                n = int(p["n"])
                if p.get("vector") is not None:
                    return pure_state(p["vector"], n)
                return random_mixed(n, 1, seed)
            if self.family == "random_mixed":
                return random_mixed(int(p["n"]), p.get("rank"), seed)
        except KeyError as exc:
            raise ValidationError(f"family {self.family!r} needs parameter {exc.args[0]!r}") from None
        raise ValidationError(f"unknown state family {self.family!r}; choose from {', '.join(FAMILIES)}")
