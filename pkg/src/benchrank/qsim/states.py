"""Pure states and density matrices at desk scale."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..errors import ValidationError

NORM_TOL = 1e-9
_PSD_TOL = 1e-8


@dataclass(frozen=True)
class QuantumState:
    """A normalized complex amplitude vector of length 2^n."""

    vector: np.ndarray

    def __post_init__(self) -> None:
        vec = np.asarray(self.vector, dtype=np.complex128)
        object.__setattr__(self, "vector", vec)
        if vec.ndim != 1 or len(vec) & (len(vec) - 1):
            raise ValidationError("state vector length must be a power of two")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")

    @property
    def num_qubits(self) -> int:
        return int(np.log2(len(self.vector)))

    @property
    def dim(self) -> int:
        return len(self.vector)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "QuantumState":
        """Computational product state |b_{n-1} ... b_0>; bits[q] is qubit q."""
        index = sum((1 << q) for q, b in enumerate(bits) if b)
        vec = np.zeros(1 << len(bits), dtype=np.complex128)
        vec[index] = 1.0
        return cls(vec)

    @classmethod
    def zero(cls, num_qubits: int) -> "QuantumState":
        return cls.from_bits([0] * num_qubits)

    def overlap(self, other: "QuantumState") -> complex:
        return complex(np.vdot(self.vector, other.vector))


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, unit-trace, positive-semidefinite 2^n x 2^n matrix."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.complex128)
        object.__setattr__(self, "matrix", mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValidationError("density matrix must be square")
        if mat.shape[0] & (mat.shape[0] - 1):
            raise ValidationError("density matrix dimension must be a power of two")
        if not np.allclose(mat, mat.conj().T, atol=_PSD_TOL):
            raise ValidationError("density matrix is not Hermitian")
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > _PSD_TOL:
            raise ValidationError(f"density matrix trace {trace} deviates from 1")
        smallest = float(np.linalg.eigvalsh(mat)[0])
        if smallest < -_PSD_TOL:
            raise ValidationError(
                f"density matrix has negative eigenvalue {smallest}"
            )

    @property
    def num_qubits(self) -> int:
        return int(np.log2(self.matrix.shape[0]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_state(cls, state: QuantumState) -> "DensityMatrix":
        return cls(np.outer(state.vector, state.vector.conj()))

    @classmethod
    def from_mixture(cls, mixture: Sequence[Tuple[float, QuantumState]]) -> "DensityMatrix":
        if not mixture:
            raise ValidationError("mixture must contain at least one state")
        dim = mixture[0][1].dim
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for prob, state in mixture:
            if prob < 0:
                raise ValidationError("mixture probabilities must be nonnegative")
            mat += prob * np.outer(state.vector, state.vector.conj())
        return cls(mat)

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        dim = 1 << num_qubits
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    @classmethod
    def depolarized(cls, state: QuantumState, p: float) -> "DensityMatrix":
        """(1-p) |psi><psi| + p I/2^n: the global depolarizing channel."""
        if not 0.0 <= p <= 1.0:
            raise ValidationError("depolarization strength must be in [0, 1]")
        pure = np.outer(state.vector, state.vector.conj())
        mixed = np.eye(state.dim, dtype=np.complex128) / state.dim
        return cls((1.0 - p) * pure + p * mixed)
