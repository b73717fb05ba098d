"""Reference solvers: random baseline, exhaustive search, simulated annealing,
and an adapter protocol for out-of-process (e.g. hardware-backed) solvers.

Everything is deterministic given its seed.  The random solver exists on
purpose: a backend whose results cannot be told apart from it earns a zero
score, which is the baseline principle of the whole benchmark suite.
"""

from __future__ import annotations

import json
import math
import subprocess
import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import SolverFailure, ValidationError
from .problems import PseudoBooleanProblem, Sense, evaluate_solution

EXHAUSTIVE_MAX_VARS = 24
_CHUNK_BITS = 16

METHODS = ("random", "exhaustive", "simulated_annealing", "external")


@dataclass(frozen=True)
class SolveResult:
    assignment: Tuple[int, ...]
    objective: float
    method: str
    seed: Optional[int] = None
    wall_clock_s: float = 0.0
    energy_j: Optional[float] = None
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(int(b) for b in self.assignment))
        object.__setattr__(self, "metadata", dict(self.metadata))


def _rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(None if seed is None else np.uint64(seed))


def solve_random(problem: PseudoBooleanProblem, seed: Optional[int] = None) -> SolveResult:
    """One uniformly random assignment: the pure random machine."""
    start = time.perf_counter()
    bits = _rng(seed).integers(0, 2, size=problem.num_vars)
    value = evaluate_solution(problem, bits)
    return SolveResult(
        assignment=tuple(bits),
        objective=value,
        method="random",
        seed=seed,
        wall_clock_s=time.perf_counter() - start,
    )


def _chunk_values(problem: PseudoBooleanProblem, base: int, count: int) -> np.ndarray:
    """Objective for assignments numbered base..base+count-1 (bit i of the
    counter is variable i), vectorized over the chunk."""
    idx = np.arange(base, base + count, dtype=np.uint64)
    values = np.full(count, problem.constant(), dtype=np.float64)
    for key, coeff in problem.terms.items():
        if not key:
            continue
        mask = np.ones(count, dtype=bool)
        for var in key:
            mask &= (idx >> np.uint64(var) & np.uint64(1)).astype(bool)
        values[mask] += coeff
    return values


def solve_exhaustive(problem: PseudoBooleanProblem) -> SolveResult:
    """Global optimum by enumeration; refused above EXHAUSTIVE_MAX_VARS variables."""
    n = problem.num_vars
    if n > EXHAUSTIVE_MAX_VARS:
        raise ValidationError(
            f"exhaustive search capped at {EXHAUSTIVE_MAX_VARS} variables, got {n}"
        )
    start = time.perf_counter()
    better = np.greater if problem.sense is Sense.MAXIMIZE else np.less
    best_value: float = math.nan
    best_index = 0
    total = 1 << n
    chunk = min(total, 1 << _CHUNK_BITS)
    for base in range(0, total, chunk):
        values = _chunk_values(problem, base, min(chunk, total - base))
        pos = int(values.argmax() if problem.sense is Sense.MAXIMIZE else values.argmin())
        if math.isnan(best_value) or better(values[pos], best_value):
            best_value = float(values[pos])
            best_index = base + pos
    bits = tuple((best_index >> i) & 1 for i in range(n))
    return SolveResult(
        assignment=bits,
        objective=best_value,
        method="exhaustive",
        wall_clock_s=time.perf_counter() - start,
        metadata={"evaluated": total},
    )


class _IncrementalObjective:
    """Mutable objective tracker: O(terms touching i) per bit flip.

    Per term we track how many of its variables are currently 0; the term
    contributes exactly when that count is 0.
    """

    def __init__(self, problem: PseudoBooleanProblem, bits: np.ndarray):
        self.coeffs: List[float] = []
        self.term_vars: List[Tuple[int, ...]] = []
        self.by_var: List[List[int]] = [[] for _ in range(problem.num_vars)]
        for key, coeff in problem.sorted_terms():
            if not key:
                continue
            t = len(self.coeffs)
            self.coeffs.append(coeff)
            self.term_vars.append(key)
            for var in key:
                self.by_var[var].append(t)
        self.bits = bits
        self.zeros = [sum(1 for v in key if not bits[v]) for key in self.term_vars]
        self.value = problem.constant() + math.fsum(
            c for c, z in zip(self.coeffs, self.zeros) if z == 0
        )

    def flip_delta(self, var: int) -> float:
        delta = 0.0
        if self.bits[var]:  # 1 -> 0: active terms through var go dark
            for t in self.by_var[var]:
                if self.zeros[t] == 0:
                    delta -= self.coeffs[t]
        else:  # 0 -> 1: terms where var was the only zero light up
            for t in self.by_var[var]:
                if self.zeros[t] == 1:
                    delta += self.coeffs[t]
        return delta

    def commit(self, var: int, delta: float) -> None:
        step = 1 if self.bits[var] else -1
        for t in self.by_var[var]:
            self.zeros[t] += step
        self.bits[var] ^= 1
        self.value += delta


def solve_simulated_annealing(
    problem: PseudoBooleanProblem,
    budget: int = 20_000,
    seed: Optional[int] = None,
    restarts: int = 3,
    t_final_ratio: float = 1e-3,
) -> SolveResult:
    """Geometric-cooling simulated annealing with single-bit-flip moves.

    ``budget`` counts proposed flips across all restarts; the cooling rate is
    derived from it so the schedule always ends near ``t_final_ratio`` times
    the starting temperature, i.e. the budget is fully consumed.
    """
    if budget < 1 or restarts < 1:
        raise ValidationError("budget and restarts must be positive")
    start = time.perf_counter()
    rng = _rng(seed)
    n = problem.num_vars
    # internally always minimize
    sign = -1.0 if problem.sense is Sense.MAXIMIZE else 1.0
    internal = PseudoBooleanProblem(
        num_vars=n,
        terms={k: sign * c for k, c in problem.terms.items()},
        sense=Sense.MINIMIZE,
        metadata={},
    )
    t0 = max((abs(c) for k, c in internal.terms.items() if k), default=1.0)
    steps = max(1, budget // restarts)
    alpha = (t_final_ratio) ** (1.0 / max(1, steps - 1))
    best_bits: Optional[np.ndarray] = None
    best_value = math.inf
    proposed = 0
    for _ in range(restarts):
        bits = rng.integers(0, 2, size=n).astype(np.int8)
        tracker = _IncrementalObjective(internal, bits)
        if tracker.value < best_value:
            best_value = tracker.value
            best_bits = bits.copy()
        temperature = t0
        flips = rng.integers(0, n, size=steps)
        uniforms = rng.random(size=steps)
        for k in range(steps):
            var = int(flips[k])
            delta = tracker.flip_delta(var)
            if delta <= 0 or uniforms[k] < math.exp(-delta / temperature):
                tracker.commit(var, delta)
                if tracker.value < best_value:
                    best_value = tracker.value
                    best_bits = tracker.bits.copy()
            temperature *= alpha
            proposed += 1
    assert best_bits is not None
    objective = evaluate_solution(problem, best_bits)
    return SolveResult(
        assignment=tuple(int(b) for b in best_bits),
        objective=objective,
        method="simulated_annealing",
        seed=seed,
        wall_clock_s=time.perf_counter() - start,
        metadata={"proposed_flips": proposed, "restarts": restarts, "t0": t0},
    )


def problem_document(problem: PseudoBooleanProblem) -> Dict[str, object]:
    """The JSON document the external-solver adapter protocol ships out."""
    return {
        "schema_version": 1,
        "num_vars": problem.num_vars,
        "sense": problem.sense.value,
        "terms": [[list(k), c] for k, c in problem.sorted_terms()],
    }


def solve_external(
    problem: PseudoBooleanProblem,
    command: Sequence[str],
    timeout_s: float = 60.0,
) -> SolveResult:
    """Run a configured adapter process on the problem document.

    The adapter reads the problem JSON on stdin and must answer with a JSON
    object carrying ``assignment`` (a 0/1 string of length num_vars) plus
    optional ``wall_clock_s``, ``energy_j`` and ``solver`` metadata.  The
    objective is recomputed locally; a malformed answer is a protocol
    violation, not a benchmark result.
    """
    payload = json.dumps(problem_document(problem))
    start = time.perf_counter()
    try:
        proc = subprocess.run(
            list(command),
            input=payload.encode(),
            capture_output=True,
            timeout=timeout_s,
        )
    except subprocess.TimeoutExpired as exc:
        raise SolverFailure(f"external solver timed out after {timeout_s}s") from exc
    elapsed = time.perf_counter() - start
    if proc.returncode != 0:
        raise SolverFailure(
            f"external solver exited with {proc.returncode}: "
            f"{proc.stderr.decode(errors='replace')[:500]}"
        )
    try:
        answer = json.loads(proc.stdout.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SolverFailure(f"external solver answered invalid JSON: {exc}") from exc
    raw = answer.get("assignment")
    if not isinstance(raw, str) or len(raw) != problem.num_vars or set(raw) - {"0", "1"}:
        raise SolverFailure(
            f"external solver answered a malformed assignment: {raw!r}"
        )
    bits = tuple(int(ch) for ch in raw)
    energy = answer.get("energy_j")
    return SolveResult(
        assignment=bits,
        objective=evaluate_solution(problem, bits),
        method="external",
        wall_clock_s=float(answer.get("wall_clock_s", elapsed)),
        energy_j=None if energy is None else float(energy),
        metadata={"solver": answer.get("solver", {}), "command": list(command)},
    )


@dataclass(frozen=True)
class SolverSpec:
    """Which solver to run and with what knobs; the unit the harness fans out."""

    method: str
    budget: int = 20_000
    restarts: int = 3
    command: Tuple[str, ...] = ()
    timeout_s: float = 60.0

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValidationError(
                f"unknown solver method {self.method!r}; expected one of {METHODS}"
            )
        if self.method == "external" and not self.command:
            raise ValidationError("external solver needs an adapter command")


def solve(
    problem: PseudoBooleanProblem,
    spec: SolverSpec | str,
    seed: Optional[int] = None,
) -> SolveResult:
    """Dispatch a solve according to a SolverSpec (or bare method name)."""
    if isinstance(spec, str):
        spec = SolverSpec(method=spec)
    if spec.method == "random":
        return solve_random(problem, seed=seed)
    if spec.method == "exhaustive":
        return solve_exhaustive(problem)
    if spec.method == "simulated_annealing":
        return solve_simulated_annealing(
            problem, budget=spec.budget, seed=seed, restarts=spec.restarts
        )
    return solve_external(problem, spec.command, timeout_s=spec.timeout_s)
