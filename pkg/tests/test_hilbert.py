import numpy as np
import pytest

from gravsim.hilbert import (
    DensityMatrix,
    DickeSpace,
    DimensionMismatchError,
    FockSpace,
    TruncationError,
    coherent_overlap,
    coherent_state,
    conditional_displacement_hamiltonian,
    dicke_operators,
    fock_cutoff_for,
    linear_entropy,
    partial_trace,
    position_wavefunction,
    quadrature_table,
    state_fidelity,
)


class TestFockSpace:
    def test_commutator_below_cutoff(self):
        space = FockSpace(12)
        a = space.annihilation()
        comm = a @ a.conj().T - a.conj().T @ a
        # the truncated commutator fails only in the top Fock level
        np.testing.assert_allclose(comm[:-1, :-1], np.eye(space.dim)[:-1, :-1], atol=1e-14)

    def test_number_operator(self):
        space = FockSpace(5)
        a = space.annihilation()
        np.testing.assert_allclose(a.conj().T @ a, space.number(), atol=1e-14)

    def test_negative_cutoff_rejected(self):
        with pytest.raises(ValueError):
            FockSpace(-1)


class TestCoherentState:
    def test_vacuum(self):
        vec, deficit = coherent_state(0.0, FockSpace(10))
        assert deficit == 0.0
        expected = np.zeros(11)
        expected[0] = 1.0
        np.testing.assert_allclose(vec, expected)

    def test_overlap_with_vacuum(self):
        space = FockSpace(40)
        vec, _ = coherent_state(1.0, space)
        assert abs(vec[0] - np.exp(-0.5)) < 1e-12

    def test_norm_deficit_small_at_heuristic_cutoff(self):
        _, deficit = coherent_state(2.0, FockSpace(40))
        assert deficit < 1e-12

    def test_truncation_error_carries_deficit(self):
        with pytest.raises(TruncationError) as err:
            coherent_state(4.0, FockSpace(10))
        assert err.value.norm_deficit > 1e-12

    def test_overlap_closed_form_vs_dense(self):
        space = FockSpace(50)
        beta, gamma = 1.2 - 0.4j, -0.3 + 0.9j
        vb, _ = coherent_state(beta, space)
        vg, _ = coherent_state(gamma, space)
        dense = np.vdot(vb, vg)
        closed = coherent_overlap(beta, gamma)
        assert abs(dense - closed) / abs(closed) < 1e-10

    def test_overlap_normalization(self):
        assert abs(coherent_overlap(0.7 + 0.1j, 0.7 + 0.1j) - 1.0) < 1e-15
        assert abs(coherent_overlap(0, 1) - np.exp(-0.5)) < 1e-12
        assert abs(abs(coherent_overlap(1, 1j)) - np.exp(-1.0)) < 1e-12


class TestDickeOperators:
    def test_single_spin(self):
        ops = dicke_operators(DickeSpace(1))
        np.testing.assert_allclose(ops.S_z, np.diag([-0.5, 0.5]))

    def test_ladder_element_n2(self):
        ops = dicke_operators(DickeSpace(2))
        # S_+ |1, 0> = sqrt(2) |1, 1>
        assert abs(ops.S_plus[2, 1] - np.sqrt(2)) < 1e-14

    @pytest.mark.parametrize("N", [1, 2, 5])
    def test_commutation_and_casimir(self, N):
        ops = dicke_operators(DickeSpace(N))
        np.testing.assert_allclose(
            ops.S_plus @ ops.S_minus - ops.S_minus @ ops.S_plus, 2 * ops.S_z, atol=1e-12
        )
        sx = 0.5 * (ops.S_plus + ops.S_minus)
        sy = -0.5j * (ops.S_plus - ops.S_minus)
        s = N / 2.0
        np.testing.assert_allclose(
            sx @ sx + sy @ sy + ops.S_z @ ops.S_z, s * (s + 1) * np.eye(N + 1), atol=1e-12
        )


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(7)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho_a = a @ a.conj().T
        rho_a /= np.trace(rho_a).real
        rho_b = np.diag([0.2, 0.8]).astype(complex)
        rho = DensityMatrix(np.kron(rho_a, rho_b), [3, 2])
        np.testing.assert_allclose(partial_trace(rho, 0).matrix, rho_a, atol=1e-12)
        np.testing.assert_allclose(partial_trace(rho, 1).matrix, rho_b, atol=1e-12)

    def test_bell_reduction(self):
        psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
        rho = DensityMatrix(np.outer(psi, psi.conj()), [2, 2])
        np.testing.assert_allclose(partial_trace(rho, 0).matrix, np.eye(2) / 2, atol=1e-14)

    def test_trace_preserved_random(self):
        rng = np.random.default_rng(3)
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        rho = DensityMatrix((m @ m.conj().T) / np.trace(m @ m.conj().T).real, [2, 3])
        for keep in (0, 1):
            red = partial_trace(rho, keep)
            assert abs(np.trace(red.matrix) - 1.0) < 1e-12
            assert red.hermiticity_defect() < 1e-12

    def test_dims_mismatch(self):
        rho = DensityMatrix(np.eye(4) / 4, [4])
        with pytest.raises(DimensionMismatchError):
            partial_trace(rho, 0)


def test_linear_entropy_limits():
    pure = DensityMatrix(np.diag([1.0, 0.0]).astype(complex), [2])
    assert abs(linear_entropy(pure)) < 1e-14
    mixed = DensityMatrix(np.eye(2, dtype=complex) / 2, [2])
    assert abs(linear_entropy(mixed) - 0.5) < 1e-14


class TestPositionWavefunction:
    def test_ground_state_at_origin(self):
        assert abs(position_wavefunction(0, 0.0) - np.pi ** (-0.25)) < 1e-12

    def test_odd_state_vanishes_at_origin(self):
        assert abs(position_wavefunction(1, 0.0, lam=0.3)) < 1e-14

    def test_rotation_phase(self):
        val = position_wavefunction(3, 0.7, lam=0.5)
        assert abs(val - position_wavefunction(3, 0.7) * np.exp(1.5j)) < 1e-12

    @pytest.mark.parametrize("n", [0, 5, 17, 30])
    def test_normalization(self, n):
        x = np.linspace(-12, 12, 4001)
        psi = position_wavefunction(n, x)
        norm = np.trapezoid(np.abs(psi) ** 2, x)
        assert abs(norm - 1.0) < 1e-8

    def test_quadrature_table_matches_rows(self):
        x = np.linspace(-3, 3, 21)
        table = quadrature_table(6, x, lam=0.4)
        np.testing.assert_allclose(table[4], position_wavefunction(4, x, lam=0.4), atol=1e-13)


def test_fock_cutoff_heuristic_keeps_deficit_small():
    for phi in [0.5, 2.0, 4.0]:
        _, deficit = coherent_state(phi, FockSpace(fock_cutoff_for(phi)))
        assert deficit < 1e-12


def test_state_fidelity_basics():
    v = np.array([1, 0], dtype=complex)
    w = np.array([1, 1], dtype=complex) / np.sqrt(2)
    assert abs(state_fidelity(v, v) - 1.0) < 1e-12
    assert abs(state_fidelity(v, w) - 0.5) < 1e-12
    rho = np.eye(2, dtype=complex) / 2
    assert abs(state_fidelity(rho, v) - 0.5) < 1e-12


def test_conditional_displacement_hamiltonian_structure():
    space = FockSpace(8)
    h = conditional_displacement_hamiltonian([-0.5, 0.5], space)
    np.testing.assert_allclose(h, h.conj().T, atol=1e-14)
    # spin-major blocks: block s is n - z_s (a + a^dag)
    blk = h[: space.dim, : space.dim]
    np.testing.assert_allclose(blk, space.number() + 0.5 * space.position_sum(), atol=1e-14)
