import numpy as np
import pytest

from clusterfid.engine import (
    CapacityError,
    DensityMatrix,
    apply_unitary,
    conjugate_on_qubit,
    embed,
    expectation,
    kron,
    partial_trace,
    project_and_normalize,
    pure_state,
)
from conftest import random_density_matrix

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PLUS = pure_state(np.array([1, 1]) / np.sqrt(2))
ZERO = pure_state(np.array([1, 0]))
ONE = pure_state(np.array([0, 1]))


class TestKron:
    def test_identity_case(self):
        assert np.allclose(kron(I2, I2), np.eye(4))

    def test_block_structure(self):
        got = kron(X, Z)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0:2, 2:4] = Z
        expected[2:4, 0:2] = Z
        assert np.allclose(got, expected)

    def test_trace_multiplicative(self, rng):
        # oracle: direct elementwise definition of the Kronecker product
        for _ in range(5):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            got = kron(a, b)
            direct = np.empty((8, 8), dtype=complex)
            for i in range(4):
                for j in range(4):
                    direct[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = a[i, j] * b
            assert np.allclose(got, direct)
            assert np.isclose(np.trace(got), np.trace(a) * np.trace(b))

    def test_associative(self, rng):
        a = rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2))
        c = rng.normal(size=(2, 2))
        assert np.max(np.abs(kron(kron(a, b), c) - kron(a, kron(b, c)))) <= 1e-14

    def test_capacity(self):
        big = np.eye(2**7)
        with pytest.raises(CapacityError):
            kron(big, big)


class TestEmbed:
    def test_single_qubit_placement(self):
        assert np.allclose(embed(X, [0], 2), np.kron(X, I2))
        assert np.allclose(embed(Z, [1], 2), np.kron(I2, Z))

    def test_two_qubit_ordering(self):
        # embed on reversed targets transposes the operator's qubit roles
        cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
        forward = embed(cnot, [0, 1], 2)
        reverse = embed(cnot, [1, 0], 2)
        assert np.allclose(forward, cnot)
        swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
        assert np.allclose(reverse, swap @ cnot @ swap)

    def test_cz_on_nonadjacent_targets_matches_statevector(self):
        # oracle: phase-flip the |1.1> amplitudes of the state vector directly
        cz = np.diag([1, 1, 1, -1]).astype(complex)
        lifted = embed(cz, [0, 2], 3)
        psi = np.full(8, 1 / np.sqrt(8), dtype=complex)
        expected = psi.copy()
        for idx in range(8):
            if (idx >> 2) & 1 and idx & 1:
                expected[idx] *= -1
        assert np.allclose(lifted @ psi, expected)

    def test_disjoint_embeds_commute(self):
        a = embed(X, [0], 3)
        b = embed(Y, [2], 3)
        assert np.allclose(a @ b, b @ a)

    def test_bad_targets(self):
        with pytest.raises(ValueError):
            embed(X, [0, 0], 2)
        with pytest.raises(ValueError):
            embed(X, [3], 2)
        with pytest.raises(ValueError):
            embed(X, [0, 1], 2)  # 2x2 op cannot cover two qubits


class TestConjugateOnQubit:
    def test_matches_embed_and_multiply(self, rng):
        # oracle: lift the operator and conjugate with dense matmuls
        for n in (1, 2, 3):
            mat = random_density_matrix(rng, n)
            for q in range(n):
                op = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                fast = conjugate_on_qubit(mat, op, q, n)
                lifted = embed(op, [q], n)
                assert np.allclose(fast, lifted @ mat @ lifted.conj().T)

    def test_rejects_bad_args(self, rng):
        mat = random_density_matrix(rng, 2)
        with pytest.raises(ValueError):
            conjugate_on_qubit(mat, np.eye(4), 0, 2)
        with pytest.raises(ValueError):
            conjugate_on_qubit(mat, X, 5, 2)


class TestApplyUnitary:
    def test_identity(self):
        out = apply_unitary(PLUS, I2)
        assert np.allclose(out.mat, PLUS.mat)

    def test_x_flips_zero(self):
        assert np.allclose(apply_unitary(ZERO, X).mat, ONE.mat)

    @pytest.mark.parametrize("pauli", [X, Y, Z])
    def test_pauli_involution(self, pauli, rng):
        rho = DensityMatrix(1, random_density_matrix(rng, 1))
        back = apply_unitary(apply_unitary(rho, pauli), pauli)
        assert np.allclose(back.mat, rho.mat)

    def test_trace_preserved(self, rng):
        rho = DensityMatrix(2, random_density_matrix(rng, 2))
        h = np.kron((X + Z) / np.sqrt(2), I2)
        out = apply_unitary(rho, h)
        assert abs(np.trace(out.mat) - 1) <= 1e-12
        out.validate(check_psd=True)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="unitary"):
            apply_unitary(ZERO, np.array([[1, 0], [0, 0.5]]))


class TestExpectation:
    def test_unit_trace(self, rng):
        rho = DensityMatrix(2, random_density_matrix(rng, 2))
        assert np.isclose(expectation(rho, np.eye(4)), 1.0)

    def test_z_on_zero(self):
        assert np.isclose(expectation(ZERO, Z), 1.0)

    def test_real_for_hermitian(self, rng):
        rho = DensityMatrix(1, random_density_matrix(rng, 1))
        assert abs(expectation(rho, Y).imag) <= 1e-10

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            expectation(ZERO, np.eye(4))


class TestProjectAndNormalize:
    def test_plus_onto_zero(self):
        prob, post = project_and_normalize(PLUS, ZERO.mat)
        assert np.isclose(prob, 0.5)
        assert np.allclose(post.mat, ZERO.mat)

    def test_identity_projector(self, rng):
        rho = DensityMatrix(1, random_density_matrix(rng, 1))
        prob, post = project_and_normalize(rho, np.eye(2))
        assert np.isclose(prob, 1.0)
        assert np.allclose(post.mat, rho.mat)

    def test_complete_set_probabilities_sum_to_one(self, rng):
        rho = DensityMatrix(2, random_density_matrix(rng, 2))
        total = 0.0
        for op, sign in [(X, 1), (X, -1)]:
            proj = np.kron((I2 + sign * op) / 2, I2)
            p, _ = project_and_normalize(rho, proj)
            total += p
        assert abs(total - 1.0) <= 1e-12

    def test_zero_probability_branch_flagged(self):
        prob, post = project_and_normalize(ZERO, ONE.mat)
        assert prob <= 1e-12
        assert post is None

    def test_rejects_non_projector(self):
        with pytest.raises(ValueError):
            project_and_normalize(ZERO, X + Z)


class TestPartialTrace:
    def test_product_state(self, rng):
        a = random_density_matrix(rng, 1)
        b = random_density_matrix(rng, 2)
        rho = DensityMatrix(3, np.kron(a, b))
        assert np.allclose(partial_trace(rho, {0}).mat, a)
        assert np.allclose(partial_trace(rho, {1, 2}).mat, b)

    def test_bell_pair_reduces_to_mixed(self):
        bell = pure_state(np.array([1, 0, 0, 1]) / np.sqrt(2))
        red = partial_trace(bell, {0})
        assert np.allclose(red.mat, np.eye(2) / 2)

    def test_trace_one_random(self, rng):
        rho = DensityMatrix(3, random_density_matrix(rng, 3))
        for keep in [{0}, {1}, {0, 2}, {0, 1, 2}]:
            red = partial_trace(rho, keep)
            assert abs(np.trace(red.mat) - 1.0) <= 1e-12
            red.validate()

    def test_empty_keep_rejected(self):
        with pytest.raises(ValueError):
            partial_trace(ZERO, set())


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(1, np.eye(4))
    bad = DensityMatrix(1, np.array([[0.9, 0.3], [0.1, 0.1]]))
    with pytest.raises(ValueError, match="Hermitian"):
        bad.validate()
