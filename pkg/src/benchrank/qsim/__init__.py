"""Desk-scale exact reference for the quantum-simulation benchmark family."""

from .dynamics import DEGENERACY_GAP, GroundState, energy_expectation, evolve, ground_state
from .io import (
    export_ideal_values,
    import_measured_values,
    simulation_benchmark_metrics,
    simulation_document,
)
from .observables import (
    ObservableSet,
    expectation_set,
    fidelity,
    infidelity_proxy,
    standard_observables,
)
from .pauli import MAX_QUBITS, SpinSystem, apply_pauli, build_hamiltonian
from .states import DensityMatrix, QuantumState

__all__ = [
    "DEGENERACY_GAP",
    "DensityMatrix",
    "GroundState",
    "MAX_QUBITS",
    "ObservableSet",
    "QuantumState",
    "SpinSystem",
    "apply_pauli",
    "build_hamiltonian",
    "energy_expectation",
    "evolve",
    "expectation_set",
    "export_ideal_values",
    "fidelity",
    "import_measured_values",
    "infidelity_proxy",
    "ground_state",
    "simulation_benchmark_metrics",
    "simulation_document",
    "standard_observables",
]
