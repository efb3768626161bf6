import numpy as np
import pytest

from telewit.errors import ValidationError
from telewit.evaluation import PAULI_X, decide, expectation
from telewit.fef import (
    CERTIFIED_USEFUL,
    NOT_DETECTED,
    OptimizerConfig,
    brute_force_fef,
    estimate_fef,
    is_useful,
    objective,
)
from telewit.operators import witness
from telewit.states import example_state, isotropic, random_haar_unitary, random_mixed, validate


def product00(n):
    M = np.zeros((n * n, n * n))
    M[0, 0] = 1
    return validate(M, n)


class TestObjective:
    def test_bell(self):
        assert objective(isotropic(2, 1), np.eye(2)) == pytest.approx(1, abs=1e-14)

    @pytest.mark.parametrize("a", [0, 0.3, 0.8, 1])
    def test_example_sigma_x(self, a):
        assert objective(example_state(a), PAULI_X) == pytest.approx(a, abs=1e-14)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_witness(self, n):
        for seed in range(20):
            rho, U = random_mixed(n, seed=seed), random_haar_unitary(n, 50 + seed)
            assert abs(n * objective(rho, U) - expectation(witness(n, U), rho)) <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            objective(isotropic(2, 1), np.eye(3))


class TestEstimate:
    @pytest.mark.parametrize("n", [2, 3])
    def test_bell(self, n):
        est = estimate_fef(isotropic(n, 1))
        assert est.value == pytest.approx(1, abs=1e-6)

    @pytest.mark.parametrize("n", [2, 3])
    def test_product(self, n, oracle):
        est = estimate_fef(product00(n))
        assert est.value == pytest.approx(1 / n, abs=1e-6)
        assert oracle[f"product00_n{n}"] == pytest.approx(1 / n, abs=1e-6)

    def test_example(self, oracle):
        assert oracle["example_a0.8"] == pytest.approx(0.8, abs=1e-6)
        assert estimate_fef(example_state(0.8)).value == pytest.approx(oracle["example_a0.8"], abs=1e-4)

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("p", [0.2, 0.6, 1.0])
    def test_isotropic(self, n, p, oracle):
        closed = p + (1 - p) / n**2
        assert oracle[f"isotropic_n{n}_p{p}"] == pytest.approx(closed, abs=1e-6)
        assert estimate_fef(isotropic(n, p)).value == pytest.approx(closed, abs=1e-4)

    def test_certificate_reproduces_value(self):
        for seed in range(10):
            rho = random_mixed(2, 2, seed)
            est = estimate_fef(rho, OptimizerConfig(restarts=3))
            assert abs(objective(rho, est.certificate) - est.value) <= 1e-10
            assert 0 <= est.value <= 1 + 1e-9
            assert np.abs(est.certificate.conj().T @ est.certificate - np.eye(2)).max() <= 1e-10

    def test_reports_budget_and_convergence(self):
        est = estimate_fef(isotropic(2, 1), OptimizerConfig(restarts=4))
        assert est.restarts_used == 4 and est.evaluations > 4 and est.converged
        starved = estimate_fef(random_mixed(3, seed=1), OptimizerConfig(restarts=1, max_evaluations=20))
        assert not starved.converged and starved.evaluations <= 21

    def test_monotone_in_restarts(self):
        rho = random_mixed(3, 3, 4)
        values = [estimate_fef(rho, OptimizerConfig(restarts=r, seed=5)).value for r in (1, 3, 6)]
        assert values[1] >= values[0] - 1e-12 and values[2] >= values[1] - 1e-12

    def test_deterministic(self):
        rho = random_mixed(2, seed=8)
        a = estimate_fef(rho, OptimizerConfig(restarts=5, seed=3))
        b = estimate_fef(rho, OptimizerConfig(restarts=5, seed=3))
        assert a.value == b.value and np.array_equal(a.certificate, b.certificate)

    def test_workers_do_not_change_result(self):
        rho = random_mixed(2, seed=9)
        a = estimate_fef(rho, OptimizerConfig(restarts=6, seed=1))
        b = estimate_fef(rho, OptimizerConfig(restarts=6, seed=1, workers=3))
        assert a.value == b.value and np.array_equal(a.certificate, b.certificate)

    @pytest.mark.parametrize("seed", range(4))
    def test_local_unitary_invariance(self, seed):
        n = 2 if seed < 2 else 3
        rho = random_mixed(n, 2, seed)
        V, W = random_haar_unitary(n, 10 + seed), random_haar_unitary(n, 20 + seed)
        L = np.kron(V, W)
        rotated = validate(L @ rho.matrix @ L.conj().T, n)
        assert estimate_fef(rotated).value == pytest.approx(estimate_fef(rho).value, abs=1e-4)


class TestIsUseful:
    def test_example_useful(self):
        verdict, est = is_useful(example_state(0.8))
        assert verdict == CERTIFIED_USEFUL
        v = decide(witness(2, est.certificate), example_state(0.8))
        assert v.detected and v.expectation == pytest.approx(1.6, abs=1e-6)

    def test_example_not_detected(self, oracle):
        assert oracle["example_a0.3"] == pytest.approx(0.35, abs=1e-6)
        verdict, est = is_useful(example_state(0.3))
        assert verdict == NOT_DETECTED
        assert est.value == pytest.approx(0.35, abs=1e-4)

    @pytest.mark.parametrize("n", [2, 3])
    def test_maximally_mixed(self, n):
        rho = isotropic(n, 0)
        verdict, est = is_useful(rho, OptimizerConfig(restarts=2))
        assert verdict == NOT_DETECTED
        assert est.value == pytest.approx(1 / n**2, abs=1e-12)
        for seed in range(5):
            assert objective(rho, random_haar_unitary(n, seed)) == pytest.approx(1 / n**2, abs=1e-12)


class TestOracle:
    def test_small_run_finds_example_optimum(self):
        value, U = brute_force_fef(example_state(0.8), samples=2000, refine=3, seed=1)
        assert value == pytest.approx(0.8, abs=1e-6)
        assert objective(example_state(0.8), U) == pytest.approx(value, abs=1e-8)

    def test_agrees_with_search_on_random_state(self):
        rho = random_mixed(2, 2, 31)
        value, _ = brute_force_fef(rho, samples=5000, refine=3, seed=2)
        assert estimate_fef(rho).value == pytest.approx(value, abs=1e-6)


def test_config_validation():
    with pytest.raises(ValidationError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ValidationError):
        OptimizerConfig(step_tolerance=0)
