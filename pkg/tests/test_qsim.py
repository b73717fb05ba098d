"""Spin-chain reference: Hamiltonians, evolution, observables, fidelity metrics."""

from __future__ import annotations

import numpy as np
import pytest

from benchrank.errors import ValidationError
from benchrank.qsim import (
    DensityMatrix,
    QuantumState,
    apply_pauli,
    build_hamiltonian,
    energy_expectation,
    evolve,
    expectation_set,
    fidelity,
    ground_state,
    import_measured_values,
    infidelity_proxy,
    simulation_document,
    standard_observables,
)


def bell_state() -> QuantumState:
    vec = np.zeros(4, dtype=complex)
    vec[0b00] = vec[0b11] = 1 / np.sqrt(2)
    return QuantumState(vec)


class TestPauliApplication:
    def test_single_qubit_matrices(self):
        basis = [np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)]
        mats = {
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]]),
            "Z": np.array([[1, 0], [0, -1]], dtype=complex),
            "I": np.eye(2, dtype=complex),
        }
        for op, mat in mats.items():
            for j, e in enumerate(basis):
                assert np.allclose(apply_pauli(op, e), mat[:, j])

    def test_two_qubit_string_matches_kron(self):
        # qubit 0 is the least significant bit: string "XZ" = Z_1 kron X_0
        rng = np.random.default_rng(0)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        z = np.array([[1, 0], [0, -1]], dtype=complex)
        assert np.allclose(apply_pauli("XZ", psi), np.kron(z, x) @ psi)

    def test_pauli_strings_are_involutions(self):
        rng = np.random.default_rng(1)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        for pauli in ("XYZ", "YIZ", "ZZX", "III"):
            assert np.allclose(apply_pauli(pauli, apply_pauli(pauli, psi)), psi)


class TestBuildHamiltonian:
    def test_tfi_zero_field_single_bond(self):
        system = build_hamiltonian("tfi", 2, g=0.0)
        assert system.terms == ((-1.0, "ZZ"),)

    def test_xy_open_chain_term_count(self):
        assert len(build_hamiltonian("xy", 3).terms) == 4  # 2 bonds x 2 terms

    def test_custom_single_x(self):
        system = build_hamiltonian("custom", 1, terms=[(1.0, "X")])
        assert np.allclose(system.dense(), np.array([[0, 1], [1, 0]], dtype=complex))

    def test_periodic_adds_wraparound_bond(self):
        open_chain = build_hamiltonian("xxz", 4, delta=0.5, boundary="open")
        ring = build_hamiltonian("xxz", 4, delta=0.5, boundary="periodic")
        assert len(ring.terms) == len(open_chain.terms) + 3

    def test_dense_matches_matrix_free_apply(self):
        system = build_hamiltonian("xxz", 5, delta=0.7)
        rng = np.random.default_rng(2)
        psi = rng.normal(size=32) + 1j * rng.normal(size=32)
        assert np.allclose(system.dense() @ psi, system.apply(psi))

    def test_dense_hermitian(self):
        for model in ("xy", "tfi", "xxz"):
            mat = build_hamiltonian(model, 4, g=1.3, delta=0.4).dense()
            assert np.allclose(mat, mat.conj().T)

    def test_size_cap(self):
        with pytest.raises(ValidationError):
            build_hamiltonian("xy", 15)


class TestEvolve:
    def test_single_qubit_rabi_analytic(self):
        # exp(-iXt)|0> = cos t |0> - i sin t |1>, so <Z> = cos 2t
        system = build_hamiltonian("custom", 1, terms=[(1.0, "X")])
        z_obs = standard_observables(1, include_pairs=False)
        for t in np.linspace(0.0, 3.0, 13):
            state = evolve(system, QuantumState.zero(1), t, method="exact")
            assert expectation_set(state, z_obs)["Z0"] == pytest.approx(
                np.cos(2 * t), abs=1e-9
            )

    def test_stationary_state_constant_observables(self):
        # |00> is an eigenstate of the zero-field Ising chain
        system = build_hamiltonian("tfi", 2, g=0.0)
        obs = standard_observables(2, include_pairs=False)
        initial = QuantumState.zero(2)
        for t in (0.3, 1.1, 2.7):
            state = evolve(system, initial, t, method="exact")
            values = expectation_set(state, obs)
            assert values["Z0"] == pytest.approx(1.0, abs=1e-9)
            assert values["Z1"] == pytest.approx(1.0, abs=1e-9)

    def test_norm_conserved_both_methods(self):
        system = build_hamiltonian("xxz", 6, delta=0.5)
        rng = np.random.default_rng(3)
        vec = rng.normal(size=64) + 1j * rng.normal(size=64)
        initial = QuantumState(vec / np.linalg.norm(vec))
        for method, steps in (("exact", None), ("trotter", 24)):
            state = evolve(system, initial, 1.3, method=method, steps=steps)
            assert np.linalg.norm(state.vector) == pytest.approx(1.0, abs=1e-9)

    def test_energy_conserved_exact(self):
        system = build_hamiltonian("xy", 6)
        rng = np.random.default_rng(4)
        vec = rng.normal(size=64) + 1j * rng.normal(size=64)
        initial = QuantumState(vec / np.linalg.norm(vec))
        e0 = energy_expectation(system, initial)
        for t in (0.5, 1.5, 3.0):
            state = evolve(system, initial, t, method="exact")
            assert energy_expectation(system, state) == pytest.approx(e0, abs=1e-9)

    def test_magnetization_conserved_xy_xxz(self):
        # XY and XXZ commute with total Z; the transverse-field chain does not
        obs_n = standard_observables(5, include_pairs=False)
        rng = np.random.default_rng(5)
        vec = rng.normal(size=32) + 1j * rng.normal(size=32)
        initial = QuantumState(vec / np.linalg.norm(vec))

        def total_z(state):
            values = expectation_set(state, obs_n)
            return sum(values[f"Z{q}"] for q in range(5))

        for model, kwargs in (("xy", {}), ("xxz", {"delta": 0.8})):
            system = build_hamiltonian(model, 5, **kwargs)
            m0 = total_z(initial)
            state = evolve(system, initial, 2.0, method="exact")
            assert total_z(state) == pytest.approx(m0, abs=1e-9)

    def test_trotter_first_order_convergence(self):
        # halving the step size halves the error (ratio in [1.5, 2.5])
        system = build_hamiltonian("xxz", 6, delta=0.5)
        initial = QuantumState.from_bits([0, 1, 0, 1, 0, 1])
        exact = evolve(system, initial, 1.0, method="exact")
        err = {}
        for steps in (32, 64):
            approx = evolve(system, initial, 1.0, method="trotter", steps=steps)
            err[steps] = np.linalg.norm(approx.vector - exact.vector)
        ratio = err[32] / err[64]
        assert 1.5 <= ratio <= 2.5

    def test_trotter_error_vanishes(self):
        system = build_hamiltonian("xy", 4)
        initial = QuantumState.from_bits([1, 0, 0, 1])
        exact = evolve(system, initial, 0.7, method="exact")
        fine = evolve(system, initial, 0.7, method="trotter", steps=4096)
        assert np.linalg.norm(fine.vector - exact.vector) < 1e-3

    def test_trotter_needs_steps(self):
        system = build_hamiltonian("xy", 2)
        with pytest.raises(ValidationError):
            evolve(system, QuantumState.zero(2), 1.0, method="trotter")


class TestGroundState:
    def test_zero_field_ising_degenerate_pair(self):
        # 4x4 by hand: -Z0Z1 has energy -1 on |00> and |11>
        result = ground_state(build_hamiltonian("tfi", 2, g=0.0))
        assert result.energy == pytest.approx(-1.0, abs=1e-12)
        assert result.degenerate
        amp = np.abs(result.state.vector) ** 2
        assert amp[0b00] + amp[0b11] == pytest.approx(1.0, abs=1e-9)

    def test_single_qubit_minus_z(self):
        result = ground_state(build_hamiltonian("custom", 1, terms=[(-1.0, "Z")]))
        assert result.energy == pytest.approx(-1.0)
        assert abs(result.state.vector[0]) == pytest.approx(1.0)
        assert not result.degenerate

    def test_rayleigh_variational_bound(self):
        system = build_hamiltonian("xxz", 5, delta=1.2)
        floor = ground_state(system).energy
        rng = np.random.default_rng(6)
        for _ in range(100):
            vec = rng.normal(size=32) + 1j * rng.normal(size=32)
            state = QuantumState(vec / np.linalg.norm(vec))
            assert energy_expectation(system, state) >= floor - 1e-9


class TestExpectations:
    def test_all_zero_state(self):
        obs = standard_observables(3, include_pairs=False)
        values = expectation_set(QuantumState.zero(3), obs)
        for q in range(3):
            assert values[f"Z{q}"] == pytest.approx(1.0)
            assert values[f"X{q}"] == pytest.approx(0.0)
            assert values[f"Y{q}"] == pytest.approx(0.0)

    def test_bell_state_correlations(self):
        # 4-amplitude hand computation on (|00> + |11>)/sqrt(2)
        values = expectation_set(bell_state(), standard_observables(2))
        assert values["Z0Z1"] == pytest.approx(1.0)
        assert values["X0X1"] == pytest.approx(1.0)
        assert values["Y0Y1"] == pytest.approx(-1.0)
        assert values["Z0"] == pytest.approx(0.0)

    def test_maximally_mixed_all_zero(self):
        rho = DensityMatrix.maximally_mixed(2)
        values = expectation_set(rho, standard_observables(2))
        assert all(abs(v) < 1e-12 for v in values.values())

    def test_density_matrix_consistent_with_pure(self):
        psi = bell_state()
        rho = DensityMatrix.from_state(psi)
        obs = standard_observables(2)
        pure = expectation_set(psi, obs)
        mixed = expectation_set(rho, obs)
        for label in obs.labels:
            assert mixed[label] == pytest.approx(pure[label], abs=1e-12)

    def test_pauli_expectations_bounded(self):
        rng = np.random.default_rng(7)
        vec = rng.normal(size=16) + 1j * rng.normal(size=16)
        state = QuantumState(vec / np.linalg.norm(vec))
        values = expectation_set(state, standard_observables(4))
        assert all(abs(v) <= 1 + 1e-12 for v in values.values())


class TestDeviceMetrics:
    def test_proxy_zero_on_identical(self):
        values = {"X0": 0.3, "Z0": -0.2}
        assert infidelity_proxy(values, dict(values)) == 0.0

    def test_proxy_single_deviation(self):
        assert infidelity_proxy({"X0": 0.4}, {"X0": 0.3}) == pytest.approx(0.1)

    def test_proxy_label_mismatch(self):
        with pytest.raises(ValidationError):
            infidelity_proxy({"X0": 0.1}, {"Z0": 0.1})

    def test_depolarization_makes_proxy_linear(self):
        system = build_hamiltonian("xxz", 3, delta=0.4)
        psi = evolve(system, QuantumState.zero(3), 0.9, method="exact")
        obs = standard_observables(3)
        ideal = expectation_set(psi, obs)
        for p in (0.0, 0.1, 0.35, 0.8):
            rho = DensityMatrix.depolarized(psi, p)
            measured = expectation_set(rho, obs)
            expected = p * sum(abs(v) for v in ideal.values())
            assert infidelity_proxy(measured, ideal) == pytest.approx(expected, abs=1e-9)

    def test_fidelity_pure_projector(self):
        psi = bell_state()
        assert fidelity(DensityMatrix.from_state(psi), psi) == pytest.approx(1.0)

    def test_fidelity_maximally_mixed(self):
        for n in (1, 2, 4):
            rng = np.random.default_rng(n)
            vec = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            psi = QuantumState(vec / np.linalg.norm(vec))
            assert fidelity(DensityMatrix.maximally_mixed(n), psi) == pytest.approx(
                2.0**-n, abs=1e-12
            )

    def test_fidelity_orthogonal_zero(self):
        psi = QuantumState.from_bits([0, 0])
        phi = QuantumState.from_bits([1, 0])
        assert fidelity(DensityMatrix.from_state(phi), psi) == pytest.approx(0.0)

    def test_fidelity_depolarized_closed_form(self):
        psi = bell_state()
        n = 2
        for p in (0.0, 0.2, 0.7, 1.0):
            rho = DensityMatrix.depolarized(psi, p)
            assert fidelity(rho, psi) == pytest.approx(1 - p * (1 - 2.0**-n), abs=1e-12)

    def test_invalid_density_matrix_rejected(self):
        with pytest.raises(ValidationError):
            DensityMatrix(np.diag([0.7, 0.7]).astype(complex))  # trace 1.4
        with pytest.raises(ValidationError):
            DensityMatrix(np.array([[1.5, 0], [0, -0.5]], dtype=complex))  # not PSD


class TestSimulationDocuments:
    def test_round_trip(self):
        system = build_hamiltonian("xy", 3)
        psi = evolve(system, QuantumState.zero(3), 0.5, method="exact")
        values = expectation_set(psi, standard_observables(3, include_pairs=False))
        doc = simulation_document(system, 0.5, values)
        t, back = import_measured_values(doc)
        assert t == 0.5
        assert back == pytest.approx(values)

    def test_duplicate_labels_rejected(self):
        doc = {
            "schema_version": 1,
            "t": 0.1,
            "values": [["X0", 0.1], ["X0", 0.2]],
        }
        with pytest.raises(ValidationError):
            import_measured_values(doc)


class TestBenchmarkMetrics:
    def test_record_metrics_shape(self):
        from benchrank.qsim import simulation_benchmark_metrics

        system = build_hamiltonian("xy", 3)
        psi = evolve(system, QuantumState.zero(3), 0.6, method="exact")
        obs = standard_observables(3)
        ideal = expectation_set(psi, obs)
        rho = DensityMatrix.depolarized(psi, 0.2)
        measured = expectation_set(rho, obs)
        metrics = simulation_benchmark_metrics(
            measured, ideal, fidelity_value=fidelity(rho, psi)
        )
        assert metrics["observable_count"] == len(obs)
        assert metrics["infidelity_proxy"] == pytest.approx(
            0.2 * sum(abs(v) for v in ideal.values()), abs=1e-9
        )
        assert 0.0 <= metrics["fidelity"] <= 1.0

    def test_fidelity_optional(self):
        from benchrank.qsim import simulation_benchmark_metrics

        metrics = simulation_benchmark_metrics({"X0": 0.1}, {"X0": 0.3})
        assert "fidelity" not in metrics
        assert metrics["infidelity_proxy"] == pytest.approx(0.2)
