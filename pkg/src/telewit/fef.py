"""Fully entangled fraction by multistart derivative-free search over U(n).

``F(rho) = max_U <psi+|(U^dagger x I) rho (U x I)|psi+>``. Any search only
certifies a lower bound, so results carry the unitary that attains them
and usefulness is reported one-sidedly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import ConsistencyError, ValidationError
from .linalg import check_unitary, expm_hermitian, hermitian_basis
from .operators import max_entangled_state
from .states import DensityMatrix

CERTIFIED_USEFUL = "certified_useful"
NOT_DETECTED = "not_detected"


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    max_evaluations: int = 5000
    step_tolerance: float = 1e-9
    seed: int = 0
    margin: float = 1e-9
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1 or self.max_evaluations < 1 or self.workers < 1:
            raise ValidationError("restarts, max_evaluations and workers must be positive")
        if not self.step_tolerance > 0:
            raise ValidationError(f"step_tolerance must be positive, got {self.step_tolerance}")
        if self.margin < 0:
            raise ValidationError(f"margin must be non-negative, got {self.margin}")


@dataclass(frozen=True)
class FefEstimate:
    value: float
    certificate: np.ndarray
    restarts_used: int
    evaluations: int
    converged: bool


def _overlap(rho_matrix: np.ndarray, U: np.ndarray) -> float:
    # (U x I)|psi+> is the row-major flattening of U / sqrt(n)
    v = U.reshape(-1)
    return float((v.conj() @ rho_matrix @ v).real) / U.shape[0]


def objective(rho: DensityMatrix, U) -> float:
    """Overlap of `rho` with the rotated maximally entangled state ``(U x I)|psi+>``."""
    U = check_unitary(U, rho.local_dim)
    val = _overlap(rho.matrix, U)
    if not -1e-10 <= val <= 1 + 1e-10:
        raise ConsistencyError(f"overlap {val!r} outside [0, 1]")
    return val


def _search_unitary(theta: np.ndarray, basis: np.ndarray) -> np.ndarray:
    # basis is flattened to (m, n*n)
    n = int(round(np.sqrt(basis.shape[1])))
    return expm_hermitian((theta @ basis).reshape(n, n))


def _restart_rng(seed: int, index: int) -> np.random.Generator:
    # child streams do not depend on the restart count, so runs with more restarts extend runs with fewer
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _one_restart(rho_matrix, basis, cfg: OptimizerConfig, index: int):
    m = basis.shape[0]
    x0 = _restart_rng(cfg.seed, index).uniform(-np.pi, np.pi, size=m)

    def neg(theta):
        return -_overlap(rho_matrix, _search_unitary(theta, basis))

    res = minimize(
        neg,
        x0,
        method="Nelder-Mead",
        options={
            "maxfev": cfg.max_evaluations,
            "maxiter": cfg.max_evaluations,
            "xatol": cfg.step_tolerance,
            "fatol": cfg.step_tolerance,
            "adaptive": m > 4,
        },
    )
    return res.x, int(res.nfev), res.status == 0


def estimate_fef(rho: DensityMatrix, cfg: OptimizerConfig | None = None) -> FefEstimate:
    """Best overlap found over `cfg.restarts` Nelder-Mead runs.

    The search runs over the traceless part of the exponential chart; the
    identity coordinate is a global phase, which the overlap ignores.
    Restarts start from seeded uniform coordinates in ``[-pi, pi]`` and are
    reduced in index order, ties going to the lowest index.
    """
    cfg = cfg or OptimizerConfig()
    n = rho.local_dim
    basis = hermitian_basis(n)[:-1].reshape(n * n - 1, n * n)
    work = lambda k: _one_restart(rho.matrix, basis, cfg, k)  # noqa: E731
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            runs = list(pool.map(work, range(cfg.restarts)))
    else:
        runs = [work(k) for k in range(cfg.restarts)]

    best_val, best = -np.inf, None
    for theta, _, conv in runs:
        U = _search_unitary(theta, basis)
        val = _overlap(rho.matrix, U)
        if val > best_val:
            best_val, best = val, (U, conv)
    U, conv = best
    return FefEstimate(
        value=objective(rho, U),
        certificate=U,
        restarts_used=cfg.restarts,
        evaluations=sum(r[1] for r in runs),
        converged=conv,
    )


def is_useful(rho: DensityMatrix, cfg: OptimizerConfig | None = None) -> tuple[str, FefEstimate]:
    """``certified_useful`` when the estimate exceeds ``1/n + cfg.margin``.

    ``not_detected`` is not a proof that the state is useless.
    """
    cfg = cfg or OptimizerConfig()
    est = estimate_fef(rho, cfg)
    verdict = CERTIFIED_USEFUL if est.value > 1.0 / rho.local_dim + cfg.margin else NOT_DETECTED
    return verdict, est


def _haar_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    Z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=1, axis2=2)
    return Q * (d / np.abs(d))[:, None, :]


def _rotated_overlap(rho_matrix, U, psi, eye):
    v = np.kron(U, eye) @ psi
    return float(np.real(v.conj() @ rho_matrix @ v))


def _hill_climb(rho_matrix, U, rng, psi, eye, step=0.3, min_step=1e-8, patience=30, max_iter=20000):
    n = U.shape[0]
    best = _rotated_overlap(rho_matrix, U, psi, eye)
    fails = 0
    for _ in range(max_iter):
        if step < min_step:
            break
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H = (G + G.conj().T) / 2
        H /= np.linalg.norm(H)
        trial = U @ expm_hermitian(step * H)
        val = _rotated_overlap(rho_matrix, trial, psi, eye)
        if val > best:
            U, best, fails = trial, val, 0
        else:
            fails += 1
            if fails >= patience:
                step, fails = step / 2, 0
    return best, U


def brute_force_fef(
    rho: DensityMatrix, samples: int = 100_000, refine: int = 10, seed: int = 0, chunk: int = 20_000
) -> tuple[float, np.ndarray]:
    """Reference FEF: Haar sampling followed by random-perturbation hill climbing.

    Independent of :func:`estimate_fef`: no exponential chart, no simplex.
    The `refine` best samples are polished and the best result returned.
    """
    n = rho.local_dim
    rng = np.random.default_rng(seed)
    psi = max_entangled_state(n)
    eye = np.eye(n)
    chunks, vals = [], []
    for start in range(0, samples, chunk):
        Us = _haar_batch(n, min(chunk, samples - start), rng)
        kron_batch = np.einsum("sij,kl->sikjl", Us, eye).reshape(-1, n * n, n * n)
        vecs = kron_batch @ psi
        vals.append(np.real(np.einsum("sa,ab,sb->s", vecs.conj(), rho.matrix, vecs)))
        chunks.append(Us)
    Us, vals = np.concatenate(chunks), np.concatenate(vals)
    top = np.argsort(vals)[::-1][:refine]
    results = [_hill_climb(rho.matrix, Us[i], rng, psi, eye) for i in top]
    return max(results, key=lambda r: r[0])


__all__ = [
    "CERTIFIED_USEFUL",
    "NOT_DETECTED",
    "FefEstimate",
    "OptimizerConfig",
    "brute_force_fef",
    "estimate_fef",
    "is_useful",
    "objective",
]
