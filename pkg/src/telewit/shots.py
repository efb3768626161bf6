"""Finite-shot estimation of the witness from local projective measurements.

Each product ``A x l`` is measured by projecting onto the eigenspaces of
`A` and `l`; eigenvalues closer than ``EIG_CLUSTER_TOL`` are treated as one
outcome, so the degenerate 0 eigenvalue of the n >= 3 generators is a
single outcome. Draws are made as multinomial counts over the joint
outcomes, which is equivalent to sampling the shots one by one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConsistencyError, ValidationError
from .linalg import hermitian_eig
from .operators import local_term_decomposition
from .states import DensityMatrix

EIG_CLUSTER_TOL = 1e-9
PROB_TOL = 1e-9
DEFAULT_FLOOR = 100

DETECTED = "detected"
INCONCLUSIVE = "inconclusive"
BELOW_THRESHOLD = "below_threshold"


@dataclass(frozen=True)
class ShotPlan:
    total_shots: int
    allocation: Literal["uniform", "proportional"] = "proportional"
    seed: int = 0
    floor: int = DEFAULT_FLOOR

    def __post_init__(self):
        if self.allocation not in ("uniform", "proportional"):
            raise ValidationError(f"allocation must be 'uniform' or 'proportional', got {self.allocation!r}")
        if self.total_shots < 1:
            raise ValidationError(f"total_shots must be positive, got {self.total_shots}")

    def allocate(self, coefficients) -> list[int]:
        """Shots per term. Proportional allocation gives every term
        ``min(floor, total // K)`` shots, then splits the rest by ``|c|``
        with largest-remainder rounding (ties to the lower index)."""
        c = np.abs(np.asarray(coefficients, dtype=float))
        K = len(c)
        if self.total_shots < K:
            raise ValidationError(f"plan has {self.total_shots} shots for {K} terms; need at least one per term")
        if self.allocation == "uniform":
            base, extra = divmod(self.total_shots, K)
            return [base + (1 if k < extra else 0) for k in range(K)]
        floor = min(self.floor, self.total_shots // K)
        rest = self.total_shots - floor * K
        share = rest * c / c.sum()
        counts = np.floor(share).astype(int)
        leftover = rest - counts.sum()
        order = sorted(range(K), key=lambda k: (-(share[k] - counts[k]), k))
        for k in order[:leftover]:
            counts[k] += 1
        return [floor + int(x) for x in counts]


@dataclass(frozen=True)
class TermEstimate:
    label: str
    coefficient: float
    mean: float
    shots: int
    variance: float


@dataclass(frozen=True)
class EstimationResult:
    constant: float
    mean: float
    standard_error: float
    per_term: tuple[TermEstimate, ...]


def _outcomes(M: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Distinct eigenvalues of `M` and the projector onto each eigenspace."""
    w, V = hermitian_eig(M)
    values, projectors = [], []
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > EIG_CLUSTER_TOL:
            block = V[:, start:k]
            values.append(w[start:k].mean())
            projectors.append(block @ block.conj().T)
            start = k
    return np.array(values), projectors


def outcome_distribution(A, B, rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Joint outcome values ``a_i * b_j`` and probabilities ``Tr[rho (P_i x Q_j)]``."""
    n = rho.local_dim
    A, B = np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)
    if A.shape != (n, n) or B.shape != (n, n):
        raise ValidationError(f"observables must be {n}x{n}, got {A.shape} and {B.shape}")
    a, P = _outcomes(A)
    b, Q = _outcomes(B)
    R = rho.matrix.reshape(n, n, n, n)
    probs = np.empty((a.size, b.size))
    for i, Pi in enumerate(P):
        for j, Qj in enumerate(Q):
            # Tr[rho (P x Q)] = sum rho[(a,b),(c,d)] P[c,a] Q[d,b]
            probs[i, j] = np.einsum("abcd,ca,db->", R, Pi, Qj).real
    total = probs.sum()
    if abs(total - 1) > PROB_TOL or probs.min() < -PROB_TOL:
        raise ConsistencyError(f"outcome probabilities invalid: sum={total!r}, min={probs.min()!r}")
    probs = np.clip(probs, 0, None)
    return np.outer(a, b).ravel(), (probs / probs.sum()).ravel()


def measure_pair(A, B, rho: DensityMatrix, shots: int, seed=0) -> tuple[float, float]:
    """Sample mean and unbiased sample variance of the product outcome of ``A x B``.

    `seed` may be anything accepted by ``numpy.random.default_rng``.
    """
    if shots < 1:
        raise ValidationError(f"shots must be positive, got {shots}")
    values, probs = outcome_distribution(A, B, rho)
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    mean = float(counts @ values) / shots
    if shots == 1:
        return mean, 0.0
    var = float(counts @ (values - mean) ** 2) / (shots - 1)
    return mean, var


def estimate_witness_mean(n: int, U, rho: DensityMatrix, plan: ShotPlan) -> EstimationResult:
    """Term-by-term shot estimate of ``<Gamma>`` for the witness defined by `U`.

    Term ``k`` draws from ``SeedSequence(plan.seed, spawn_key=(k,))``.
    """
    if rho.local_dim != n:
        raise ValidationError(f"state has n={rho.local_dim}, witness n={n}")
    dec = local_term_decomposition(n, U)
    terms = [t for t in dec.terms if t.coefficient != 0]
    shots = plan.allocate([t.coefficient for t in terms])
    per_term = []
    for k, (t, N) in enumerate(zip(terms, shots)):
        seed = np.random.SeedSequence(plan.seed, spawn_key=(k,))
        mean, var = measure_pair(t.left, t.right, rho, N, seed)
        per_term.append(TermEstimate(t.label, t.coefficient, mean, N, var))
    total = dec.constant + sum(e.coefficient * e.mean for e in per_term)
    se = float(np.sqrt(sum(e.coefficient**2 * e.variance / e.shots for e in per_term)))
    return EstimationResult(dec.constant, float(total), se, tuple(per_term))


def detect_with_confidence(result: EstimationResult, sigmas: float = 3.0) -> str:
    if not sigmas > 0:
        raise ValidationError(f"sigmas must be positive, got {sigmas}")
    if result.mean - sigmas * result.standard_error > 1:
        return DETECTED
    if result.mean + sigmas * result.standard_error < 1:
        return BELOW_THRESHOLD
    return INCONCLUSIVE
