"""Linear-system payloads and the solution-quality metric.

Only the residual metric is implemented here; producing candidate solutions
is the job of whatever backend is being benchmarked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class LinearSystem:
    """A well-conditioned dense system Ax = b with its known solution."""

    matrix: np.ndarray
    rhs: np.ndarray
    solution: np.ndarray

    def __post_init__(self) -> None:
        a, b, x = self.matrix, self.rhs, self.solution
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError("matrix must be square")
        if b.shape != (a.shape[0],) or x.shape != (a.shape[1],):
            raise ValidationError("rhs/solution dimensions do not match the matrix")


def random_linear_system(n: int, cond: float, rng: np.random.Generator) -> LinearSystem:
    """Random SPD-free system with singular values log-spaced in [1, cond]."""
    if n < 1 or cond < 1:
        raise ValidationError("need n >= 1 and condition number >= 1")
    u, _ = np.linalg.qr(rng.normal(size=(n, n)))
    v, _ = np.linalg.qr(rng.normal(size=(n, n)))
    sigma = np.geomspace(1.0, cond, n)
    a = u @ np.diag(sigma) @ v.T
    x = rng.normal(size=n)
    return LinearSystem(matrix=a, rhs=a @ x, solution=x)


def linear_residual(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> float:
    """Relative residual ||Ax - b|| / ||b|| of a candidate solution."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    if a.ndim != 2 or a.shape[1] != x.shape[0] or a.shape[0] != b.shape[0]:
        raise ValidationError("dimension mismatch between A, b and x")
    norm_b = float(np.linalg.norm(b))
    if norm_b == 0.0:
        raise ValidationError("zero right-hand side; relative residual undefined")
    return float(np.linalg.norm(a @ x - b) / norm_b)
