"""Time evolution and ground states by exact diagonalization.

Exact evolution diagonalizes the dense Hamiltonian once and applies phases;
Trotter evolution multiplies first-order per-term exponentials, each applied
matrix-free through the P^2 = I identity.  Exact diagonalization stands in
for analytically solvable special cases at desk scale: it is exact for every
model, not just the integrable ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ValidationError
from .pauli import SpinSystem, apply_pauli
from .states import QuantumState

#: spectral gap below which a ground state is reported as degenerate
DEGENERACY_GAP = 1e-9


def _check_dims(system: SpinSystem, state: QuantumState) -> None:
    if system.dim != state.dim:
        raise ValidationError(
            f"state dimension {state.dim} does not match Hamiltonian dimension {system.dim}"
        )


def evolve(
    system: SpinSystem,
    initial: QuantumState,
    t: float,
    method: str = "exact",
    steps: Optional[int] = None,
) -> QuantumState:
    """|psi_t> = exp(-i H t) |psi_0> (hbar = 1).

    ``exact`` diagonalizes the dense Hamiltonian; ``trotter`` performs
    ``steps`` first-order slices of per-term exponentials.  Both return a
    normalized state.
    """
    _check_dims(system, initial)
    if method == "exact":
        energies, vectors = np.linalg.eigh(system.dense())
        phases = np.exp(-1j * energies * t)
        vec = vectors @ (phases * (vectors.conj().T @ initial.vector))
    elif method == "trotter":
        if steps is None or steps < 1:
            raise ValidationError("trotter evolution needs steps >= 1")
        dt = t / steps
        vec = initial.vector.copy()
        for _ in range(steps):
            for coeff, pauli in system.terms:
                theta = coeff * dt
                vec = np.cos(theta) * vec - 1j * np.sin(theta) * apply_pauli(pauli, vec)
    else:
        raise ValidationError(f"unknown evolution method {method!r}")
    vec = vec / np.linalg.norm(vec)
    return QuantumState(vec)


@dataclass(frozen=True)
class GroundState:
    energy: float
    state: QuantumState
    degenerate: bool
    gap: float


def ground_state(system: SpinSystem) -> GroundState:
    """Lowest eigenpair of H; flags (near-)degenerate ground spaces.

    For a degenerate ground space any member may be returned.
    """
    energies, vectors = np.linalg.eigh(system.dense())
    gap = float(energies[1] - energies[0]) if len(energies) > 1 else np.inf
    vec = vectors[:, 0]
    vec = vec / np.linalg.norm(vec)
    return GroundState(
        energy=float(energies[0]),
        state=QuantumState(vec),
        degenerate=gap < DEGENERACY_GAP,
        gap=gap,
    )


def energy_expectation(system: SpinSystem, state: QuantumState) -> float:
    """<psi|H|psi>, computed matrix-free."""
    _check_dims(system, state)
    return float(np.vdot(state.vector, system.apply(state.vector)).real)
