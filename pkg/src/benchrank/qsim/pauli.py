"""Pauli-string machinery and spin-chain Hamiltonians.

A Hamiltonian is a real-weighted sum of Pauli strings over n qubits (n <= 14,
hbar = 1 throughout).  Strings are text like ``"XIZY"`` with character q
acting on qubit q; qubit 0 is the least significant bit of a basis index.
Every Pauli string squares to the identity, which the time evolution exploits:
exp(-i theta P) = cos(theta) I - i sin(theta) P, applied without ever forming
a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import ValidationError

MAX_QUBITS = 14

_PAULI_CHARS = frozenset("IXYZ")


def _validate_string(pauli: str, num_qubits: int) -> None:
    if len(pauli) != num_qubits:
        raise ValidationError(
            f"Pauli string {pauli!r} has length {len(pauli)}, expected {num_qubits}"
        )
    if set(pauli) - _PAULI_CHARS:
        raise ValidationError(f"Pauli string {pauli!r} contains invalid characters")


def _masks(pauli: str) -> Tuple[int, int, int]:
    """(flip, y, z) bit masks of a Pauli string; qubit q is bit q."""
    flip = y = z = 0
    for q, ch in enumerate(pauli):
        if ch in "XY":
            flip |= 1 << q
        if ch == "Y":
            y |= 1 << q
        if ch == "Z":
            z |= 1 << q
    return flip, y, z


def apply_pauli(pauli: str, state: np.ndarray) -> np.ndarray:
    """P|psi> for a Pauli string, via index permutation and phases: O(2^n)."""
    n = int(np.log2(len(state)))
    _validate_string(pauli, n)
    flip, ymask, zmask = _masks(pauli)
    idx = np.arange(len(state), dtype=np.uint64)
    parity = np.bitwise_count(idx & np.uint64(ymask | zmask)) & 1
    phase = (1j) ** pauli.count("Y") * np.where(parity, -1.0, 1.0)
    out = np.empty_like(state, dtype=np.complex128)
    out[idx ^ np.uint64(flip)] = phase * state
    return out


@dataclass(frozen=True)
class SpinSystem:
    """A spin-1/2 Hamiltonian as real coefficients on Pauli strings."""

    num_qubits: int
    terms: Tuple[Tuple[float, str], ...]
    model: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)
    boundary: str = "open"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "terms", tuple((float(c), str(p)) for c, p in self.terms)
        )
        object.__setattr__(self, "params", dict(self.params))
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValidationError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}"
            )
        if self.boundary not in ("open", "periodic"):
            raise ValidationError(f"unknown boundary {self.boundary!r}")
        for coeff, pauli in self.terms:
            # real coefficients on Hermitian strings keep H Hermitian
            if not np.isfinite(coeff):
                raise ValidationError(f"non-finite coefficient on {pauli!r}")
            _validate_string(pauli, self.num_qubits)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def apply(self, state: np.ndarray) -> np.ndarray:
        """H|psi> without materializing the matrix."""
        out = np.zeros(self.dim, dtype=np.complex128)
        for coeff, pauli in self.terms:
            out += coeff * apply_pauli(pauli, state)
        return out

    def dense(self) -> np.ndarray:
        """The full 2^n x 2^n matrix; each Pauli string has one entry per column."""
        idx = np.arange(self.dim, dtype=np.uint64)
        mat = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for coeff, pauli in self.terms:
            flip, ymask, zmask = _masks(pauli)
            parity = np.bitwise_count(idx & np.uint64(ymask | zmask)) & 1
            phase = (1j) ** pauli.count("Y") * np.where(parity, -1.0, 1.0)
            mat[idx ^ np.uint64(flip), idx] += coeff * phase
        return mat


def _string(num_qubits: int, ops: Mapping[int, str]) -> str:
    chars = ["I"] * num_qubits
    for q, op in ops.items():
        chars[q] = op
    return "".join(chars)


def _bonds(n: int, boundary: str) -> list[Tuple[int, int]]:
    bonds = [(i, i + 1) for i in range(n - 1)]
    if boundary == "periodic" and n > 2:
        bonds.append((n - 1, 0))
    return bonds


def build_hamiltonian(
    model: str,
    num_qubits: int,
    g: float = 1.0,
    delta: float = 1.0,
    boundary: str = "open",
    terms: Optional[Sequence[Tuple[float, str]]] = None,
) -> SpinSystem:
    """Standard spin chains by name, or a custom term list.

    ``xy``:  sum over bonds of XX + YY;
    ``tfi``: minus sum of ZZ bonds minus g times sum of X;
    ``xxz``: sum over bonds of XX + YY + delta * ZZ;
    ``custom``: the verbatim ``terms`` list.
    """
    model = model.lower()
    if model == "custom":
        if terms is None:
            raise ValidationError("custom model requires an explicit term list")
        return SpinSystem(num_qubits, tuple(terms), model="custom", boundary=boundary)
    built: list[Tuple[float, str]] = []
    params: Dict[str, float] = {}
    if model == "xy":
        for i, j in _bonds(num_qubits, boundary):
            built.append((1.0, _string(num_qubits, {i: "X", j: "X"})))
            built.append((1.0, _string(num_qubits, {i: "Y", j: "Y"})))
    elif model == "tfi":
        params["g"] = float(g)
        for i, j in _bonds(num_qubits, boundary):
            built.append((-1.0, _string(num_qubits, {i: "Z", j: "Z"})))
        if g != 0.0:
            for i in range(num_qubits):
                built.append((-float(g), _string(num_qubits, {i: "X"})))
    elif model == "xxz":
        params["delta"] = float(delta)
        for i, j in _bonds(num_qubits, boundary):
            built.append((1.0, _string(num_qubits, {i: "X", j: "X"})))
            built.append((1.0, _string(num_qubits, {i: "Y", j: "Y"})))
            if delta != 0.0:
                built.append((float(delta), _string(num_qubits, {i: "Z", j: "Z"})))
    else:
        raise ValidationError(f"unknown model {model!r}; use xy, tfi, xxz or custom")
    return SpinSystem(
        num_qubits, tuple(built), model=model, params=params, boundary=boundary
    )
