"""The Q-score protocol: largest MaxCut size a solver still handles well.

At each problem size n the solver runs on a batch of random instances; the
mean best cut is normalized into beta(n) = (mean - n^2/8) / (0.178 n^1.5),
which is 0 for a random machine and about 1 for an exact one.  The Q-score
is the largest tested n with beta above the acceptance threshold.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import SolverFailure, ValidationError
from .generators import gen_instance
from .solvers import SolverSpec, solve

#: beta threshold below which a size does not count, after the reference
#: protocol for the published Q-score values.
DEFAULT_BETA_THRESHOLD = 0.2


@dataclass(frozen=True)
class QScoreConfig:
    sizes: Tuple[int, ...] = (5, 10, 15, 20, 25, 30)
    instances_per_size: int = 30
    solver_budget: int = 20_000
    beta_threshold: float = DEFAULT_BETA_THRESHOLD
    #: expected cut of a random assignment, as a fraction of n^2
    random_mean_coeff: float = 0.125
    #: estimated best-cut excess over random, as a multiple of n^1.5
    best_excess_coeff: float = 0.178
    seed: int = 0

    def __post_init__(self) -> None:
        sizes = tuple(int(n) for n in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes or any(a >= b for a, b in zip(sizes, sizes[1:])):
            raise ValidationError("sizes must be strictly increasing")
        if sizes[0] < 5:
            raise ValidationError("beta is unreliable below n = 5; sizes start at 5")
        if not 0.0 < self.beta_threshold < 1.0:
            raise ValidationError("beta threshold must lie in (0, 1)")
        if self.instances_per_size < 1:
            raise ValidationError("need at least one instance per size")

    def random_cut_mean(self, n: int) -> float:
        return self.random_mean_coeff * n * n

    def best_cut_estimate(self, n: int) -> float:
        return self.random_cut_mean(n) + self.best_excess_coeff * n**1.5


def beta_score(n: int, mean_best_cut: float, cfg: QScoreConfig | None = None) -> float:
    """Normalized solver quality at size n: 0 = random baseline, 1 = estimated optimum."""
    cfg = cfg or QScoreConfig()
    if n < 5:
        raise ValidationError("beta is defined for n >= 5")
    span = cfg.best_cut_estimate(n) - cfg.random_cut_mean(n)
    return (mean_best_cut - cfg.random_cut_mean(n)) / span


def instance_seed(master_seed: int, n: int, index: int) -> int:
    """Stable per-instance seed derived from (master seed, size, index)."""
    ss = np.random.SeedSequence([int(master_seed), int(n), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class InstanceRun:
    n: int
    index: int
    seed: int
    cut: float
    wall_clock_s: float


@dataclass(frozen=True)
class SizeResult:
    n: int
    runs: Tuple[InstanceRun, ...]
    mean_best_cut: float
    beta: float
    passed: bool


@dataclass(frozen=True)
class QScoreResult:
    score: int
    sizes: Tuple[SizeResult, ...]
    solver: SolverSpec
    config: QScoreConfig

    def passed_sizes(self) -> Tuple[int, ...]:
        return tuple(s.n for s in self.sizes if s.passed)


def qscore(
    solver: SolverSpec | str,
    cfg: QScoreConfig | None = None,
    repeats_per_instance: int = 1,
) -> QScoreResult:
    """Run the full protocol and return the score with per-size evidence.

    A solver failure at any size aborts the protocol but the exception
    carries the sizes already completed.  ``repeats_per_instance`` averages
    several seeded runs per instance (useful to steady the random baseline);
    the per-instance cut is then the mean over repeats.
    """
    cfg = cfg or QScoreConfig()
    if isinstance(solver, str):
        solver = SolverSpec(method=solver, budget=cfg.solver_budget)
    results: list[SizeResult] = []
    for n in cfg.sizes:
        runs: list[InstanceRun] = []
        for index in range(cfg.instances_per_size):
            seed = instance_seed(cfg.seed, n, index)
            instance = gen_instance("maxcut", {"n": n}, seed)
            assert instance.problem is not None
            start = time.perf_counter()
            cuts = []
            try:
                for rep in range(max(1, repeats_per_instance)):
                    result = solve(instance.problem, solver, seed=seed + rep)
                    cuts.append(result.objective)
            except (SolverFailure, ValidationError) as exc:
                partial = QScoreResult(
                    score=_score_from(results, cfg),
                    sizes=tuple(results),
                    solver=solver,
                    config=cfg,
                )
                raise SolverFailure(
                    f"solver failed at n={n}, instance {index}: {exc}", partial
                ) from exc
            runs.append(
                InstanceRun(
                    n=n,
                    index=index,
                    seed=seed,
                    cut=float(np.mean(cuts)),
                    wall_clock_s=time.perf_counter() - start,
                )
            )
        mean_best = float(np.mean([r.cut for r in runs]))
        beta = beta_score(n, mean_best, cfg)
        results.append(
            SizeResult(
                n=n,
                runs=tuple(runs),
                mean_best_cut=mean_best,
                beta=beta,
                passed=beta > cfg.beta_threshold,
            )
        )
    return QScoreResult(
        score=_score_from(results, cfg),
        sizes=tuple(results),
        solver=solver,
        config=cfg,
    )


def _score_from(results: list[SizeResult], cfg: QScoreConfig) -> int:
    passed = [s.n for s in results if s.passed]
    return max(passed) if passed else 0
