from fractions import Fraction

import numpy as np
import pytest

from telewit.errors import DomainError, ValidationError
from telewit.evaluation import (
    PAULI_X,
    decide,
    expectation,
    fidelity_from_fef,
    qubit_witness_value,
)
from telewit.operators import witness
from telewit.states import (
    example_state,
    isotropic,
    product_state,
    random_haar_unitary,
    random_local_state,
    random_mixed,
    validate,
)

GRID = np.round(np.arange(0, 1.0001, 0.25), 12)


def zero_zero():
    M = np.zeros((4, 4))
    M[0, 0] = 1
    return validate(M, 2)


class TestExpectation:
    def test_bell_identity(self):
        assert expectation(witness(2, np.eye(2)), isotropic(2, 1)) == pytest.approx(2, abs=1e-14)

    @pytest.mark.parametrize("a", GRID)
    def test_example_sigma_x(self, a):
        assert expectation(witness(2, PAULI_X), example_state(a)) == pytest.approx(2 * a, abs=1e-14)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_maximally_mixed(self, n):
        rho = isotropic(n, 0)
        for seed in range(5):
            assert expectation(witness(n, random_haar_unitary(n, seed)), rho) == pytest.approx(1 / n, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            expectation(witness(3, np.eye(3)), isotropic(2, 0))

    def test_linearity(self):
        r1, r2 = random_mixed(3, seed=1), random_mixed(3, seed=2)
        W = witness(3, random_haar_unitary(3, 3))
        alpha = 0.3
        mix = validate(alpha * r1.matrix + (1 - alpha) * r2.matrix, 3)
        lhs = expectation(W, mix)
        rhs = alpha * expectation(W, r1) + (1 - alpha) * expectation(W, r2)
        assert abs(lhs - rhs) <= 1e-12


class TestDecide:
    def test_detects(self):
        v = decide(witness(2, PAULI_X), example_state(0.8))
        assert v.expectation == pytest.approx(1.6, abs=1e-14) and v.detected
        assert v.threshold == 1

    def test_not_detected(self):
        v = decide(witness(2, PAULI_X), example_state(0.3))
        assert v.expectation == pytest.approx(0.6, abs=1e-14) and not v.detected

    def test_mixed(self):
        v = decide(witness(2, random_haar_unitary(2, 4)), isotropic(2, 0))
        assert v.expectation == pytest.approx(0.5, abs=1e-14) and not v.detected

    def test_boundary_strict(self):
        assert not decide(witness(2, PAULI_X), example_state(0.5)).detected

    def test_margin(self):
        W, rho = witness(2, PAULI_X), example_state(0.8)
        assert decide(W, rho, margin=0.5).detected
        assert not decide(W, rho, margin=0.7).detected


class TestQubitForm:
    @pytest.mark.parametrize("a", GRID)
    def test_example(self, a):
        assert qubit_witness_value(PAULI_X, example_state(a)) - 1 == pytest.approx(4 * a - 2, abs=1e-12)

    def test_bell(self):
        assert qubit_witness_value(np.eye(2), isotropic(2, 1)) == pytest.approx(3, abs=1e-14)

    def test_product_boundary(self):
        rho = zero_zero()
        assert qubit_witness_value(np.eye(2), rho) == pytest.approx(1, abs=1e-14)
        assert not decide(witness(2, np.eye(2)), rho).detected

    def test_factor_two_relation(self):
        for seed in range(200):
            rho = random_mixed(2, 1 + seed % 4, seed)
            U = random_haar_unitary(2, 1000 + seed)
            e = expectation(witness(2, U), rho)
            q = qubit_witness_value(U, rho)
            assert abs(q - (2 * e - 1)) <= 1e-10
            assert (q > 1) == (e > 1)

    def test_needs_two_qubits(self):
        with pytest.raises(ValidationError):
            qubit_witness_value(np.eye(2), isotropic(3, 0))


def test_separable_spot_check():
    rng = np.random.default_rng(99)
    for k in range(100):
        rho = product_state(random_local_state(2, rng), random_local_state(2, rng))
        for j in range(10):
            assert expectation(witness(2, random_haar_unitary(2, 10 * k + j)), rho) <= 1 + 1e-9


class TestFidelity:
    def test_perfect(self):
        assert fidelity_from_fef(1, 2) == 1

    @pytest.mark.parametrize("n", range(2, 9))
    def test_classical_threshold(self, n):
        assert fidelity_from_fef(Fraction(1, n), n) == Fraction(2, n + 1)
        assert fidelity_from_fef(1 / n, n) == 2 / (n + 1)

    def test_half(self):
        assert fidelity_from_fef(0.5, 2) == pytest.approx(2 / 3, abs=1e-15)

    def test_affine_increasing(self):
        F = np.linspace(0, 1, 21)
        f = np.array([fidelity_from_fef(x, 3) for x in F])
        assert np.all(np.diff(f) > 0)
        np.testing.assert_allclose(np.diff(f, 2), 0, atol=1e-15)

    @pytest.mark.parametrize("F,n", [(-0.1, 2), (1.1, 2), (0.5, 1)])
    def test_domain(self, F, n):
        with pytest.raises(DomainError):
            fidelity_from_fef(F, n)
