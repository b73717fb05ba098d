"""Pauli observables, expectation values and the device-quality metrics.

A device run is scored by comparing its measured expectation values against
the exact ones: the absolute deviations summed over the observable set give
G (an infidelity proxy that is 0 for a perfect device), and when the full
mixed state is available the overlap fidelity F with the ideal state is
computed directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Tuple, Union

import numpy as np

from ..errors import ValidationError
from .pauli import _masks, _validate_string, apply_pauli
from .states import DensityMatrix, QuantumState


@dataclass(frozen=True)
class ObservableSet:
    """Uniquely labeled Pauli observables of weight at most 2."""

    observables: Tuple[Tuple[str, str], ...]  # (label, pauli string)

    def __post_init__(self) -> None:
        obs = tuple((str(label), str(pauli)) for label, pauli in self.observables)
        object.__setattr__(self, "observables", obs)
        if not obs:
            raise ValidationError("observable set is empty")
        labels = [label for label, _ in obs]
        if len(set(labels)) != len(labels):
            raise ValidationError("observable labels must be unique")
        n = len(obs[0][1])
        for label, pauli in obs:
            _validate_string(pauli, n)
            weight = sum(1 for ch in pauli if ch != "I")
            if weight > 2:
                raise ValidationError(
                    f"observable {label!r} has weight {weight}; the set is "
                    "limited to one- and two-qubit observables"
                )

    @property
    def num_qubits(self) -> int:
        return len(self.observables[0][1])

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(label for label, _ in self.observables)

    def __len__(self) -> int:
        return len(self.observables)


def standard_observables(num_qubits: int, include_pairs: bool = True) -> ObservableSet:
    """All X_i, Y_i, Z_i and, optionally, all two-qubit Pauli products."""
    obs: list[Tuple[str, str]] = []

    def string(ops: Dict[int, str]) -> str:
        chars = ["I"] * num_qubits
        for q, op in ops.items():
            chars[q] = op
        return "".join(chars)

    for q in range(num_qubits):
        for op in "XYZ":
            obs.append((f"{op}{q}", string({q: op})))
    if include_pairs:
        for i in range(num_qubits):
            for j in range(i + 1, num_qubits):
                for a in "XYZ":
                    for b in "XYZ":
                        obs.append((f"{a}{i}{b}{j}", string({i: a, j: b})))
    return ObservableSet(tuple(obs))


def _expectation_pure(pauli: str, state: QuantumState) -> float:
    return float(np.vdot(state.vector, apply_pauli(pauli, state.vector)).real)


def _expectation_mixed(pauli: str, rho: DensityMatrix) -> float:
    # Tr(rho P) via the single nonzero entry per column of a Pauli string
    n = rho.num_qubits
    _validate_string(pauli, n)
    flip, ymask, zmask = _masks(pauli)
    idx = np.arange(rho.dim, dtype=np.uint64)
    parity = np.bitwise_count(idx & np.uint64(ymask | zmask)) & 1
    phase = (1j) ** pauli.count("Y") * np.where(parity, -1.0, 1.0)
    entries = rho.matrix[idx, idx ^ np.uint64(flip)]
    return float(np.sum(phase * entries).real)


def expectation_set(
    state: Union[QuantumState, DensityMatrix], obs: ObservableSet
) -> Dict[str, float]:
    """Real expectation value per labeled observable."""
    if state.num_qubits != obs.num_qubits:
        raise ValidationError(
            f"state has {state.num_qubits} qubits, observables have {obs.num_qubits}"
        )
    if isinstance(state, QuantumState):
        return {label: _expectation_pure(p, state) for label, p in obs.observables}
    return {label: _expectation_mixed(p, state) for label, p in obs.observables}


def infidelity_proxy(
    measured: Mapping[str, float], ideal: Mapping[str, float]
) -> float:
    """G = sum over observables of |measured - ideal|; 0 iff identical."""
    if set(measured) != set(ideal):
        missing = sorted(set(ideal) - set(measured))
        extra = sorted(set(measured) - set(ideal))
        raise ValidationError(
            f"observable labels mismatch: missing {missing}, unexpected {extra}"
        )
    return float(sum(abs(measured[k] - ideal[k]) for k in measured))


def fidelity(rho: DensityMatrix, psi: QuantumState) -> float:
    """F = <psi| rho |psi>: overlap of the realized mixed state with the target."""
    if rho.dim != psi.dim:
        raise ValidationError("density matrix and state dimensions differ")
    value = float(np.vdot(psi.vector, rho.matrix @ psi.vector).real)
    # rho validation guarantees this lies in [0, 1] up to round-off
    return min(max(value, 0.0), 1.0)
