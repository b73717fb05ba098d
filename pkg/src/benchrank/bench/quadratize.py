"""Degree reduction of higher-order problems to QUBOs via ancilla variables.

Each round picks the variable pair occurring most often inside terms of
degree >= 3, substitutes it with a fresh ancilla y, and adds the penalty
M * (x_i x_j - 2 x_i y - 2 x_j y + 3 y), which is 0 exactly when
y = x_i x_j and at least M otherwise.  For M above the total coefficient
mass, optima of the reduced problem project onto optima of the original.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from typing import Dict

from ..errors import ValidationError
from .problems import PseudoBooleanProblem, Sense, Term


def default_penalty(problem: PseudoBooleanProblem) -> float:
    """1 plus the total absolute coefficient mass: always dominates any gain."""
    return 1.0 + sum(abs(c) for k, c in problem.terms.items() if k)


def quadratize(problem: PseudoBooleanProblem, penalty: float | None = None) -> PseudoBooleanProblem:
    """Equivalent QUBO with ancilla variables for a degree >= 3 problem.

    The returned problem has ``metadata["ancillas"]`` listing
    (ancilla, var_a, var_b) substitutions and ``metadata["original_num_vars"]``
    so solutions can be projected back.
    """
    if problem.degree <= 2:
        raise ValidationError("problem is already quadratic; nothing to reduce")
    m = default_penalty(problem) if penalty is None else float(penalty)
    if m <= 0:
        raise ValidationError("penalty must be positive")
    # penalties oppose the optimization direction so violations never win
    sign = 1.0 if problem.sense is Sense.MINIMIZE else -1.0

    terms: Dict[Term, float] = dict(problem.terms)
    num_vars = problem.num_vars
    ancillas: list[tuple[int, int, int]] = []
    while max(len(k) for k in terms) > 2:
        pair_counts: Counter = Counter()
        for key in terms:
            if len(key) >= 3:
                pair_counts.update(combinations(key, 2))
        # most frequent pair, ties broken lexicographically for determinism
        best = max(pair_counts, key=lambda p: (pair_counts[p], (-p[0], -p[1])))
        i, j = best
        y = num_vars
        num_vars += 1
        ancillas.append((y, i, j))
        replaced: Dict[Term, float] = {}
        for key, coeff in terms.items():
            if len(key) >= 3 and i in key and j in key:
                key = tuple(sorted(set(key) - {i, j} | {y}))
            replaced[key] = replaced.get(key, 0.0) + coeff
        terms = replaced
        for key, delta in (
            ((i, j), 1.0),
            ((i, y), -2.0),
            ((j, y), -2.0),
            ((y,), 3.0),
        ):
            terms[key] = terms.get(key, 0.0) + sign * m * delta
    return PseudoBooleanProblem(
        num_vars=num_vars,
        terms=terms,
        sense=problem.sense,
        metadata={
            **problem.metadata,
            "ancillas": tuple(ancillas),
            "original_num_vars": problem.num_vars,
            "penalty": m,
        },
    )


def project_assignment(quadratized: PseudoBooleanProblem, bits) -> tuple[int, ...]:
    """Original-variable part of an assignment to a quadratized problem."""
    n0 = quadratized.metadata.get("original_num_vars")
    if n0 is None:
        raise ValidationError("problem was not produced by quadratize")
    return tuple(int(b) for b in list(bits)[: int(n0)])
