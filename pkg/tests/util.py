"""Test helpers: random capacities, random trees, independent oracles."""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from benchrank.mcda import (
    ChoquetParams,
    CriteriaTree,
    Direction,
    UtilityFunction,
    aggregation,
    criterion,
)


def random_capacity(rng: np.random.Generator, children: list[str]) -> ChoquetParams:
    """Random valid ChoquetParams: nonnegative coefficients scaled to sum 1."""
    singles = {c: float(rng.uniform(0.05, 1.0)) for c in children}
    mins = {}
    maxs = {}
    for pair in combinations(sorted(children), 2):
        if rng.random() < 0.5:
            mins[pair] = float(rng.uniform(0.0, 0.5))
        if rng.random() < 0.5:
            maxs[pair] = float(rng.uniform(0.0, 0.5))
    total = math.fsum(list(singles.values()) + list(mins.values()) + list(maxs.values()))
    singles = {c: w / total for c, w in singles.items()}
    mins = {k: w / total for k, w in mins.items()}
    maxs = {k: w / total for k, w in maxs.items()}
    # absorb rounding into one singleton so the strict sum-to-one check passes
    drift = 1.0 - math.fsum(list(singles.values()) + list(mins.values()) + list(maxs.values()))
    first = children[0]
    singles[first] += drift
    return ChoquetParams(singles, mins, maxs)


def linear_utility(metric_id: str, bad: float = 0.0, good: float = 1.0) -> UtilityFunction:
    return UtilityFunction(
        metric_id=metric_id,
        direction=Direction.HIGHER_IS_BETTER,
        breakpoints=((bad, 0.0), (good, 1.0)),
        bad_index=0,
        good_index=1,
    )


def random_tree(
    rng: np.random.Generator, max_depth: int = 3, max_arity: int = 5
) -> CriteriaTree:
    """Random hierarchy with linear leaf utilities on metrics m0, m1, ...

    Every aggregation node gets a random valid capacity; leaf metrics are
    all distinct and higher-is-better on [0, 1].
    """
    nodes = {}
    counter = {"leaf": 0, "agg": 0}

    def build(depth: int) -> str:
        make_leaf = depth >= max_depth or (depth > 0 and rng.random() < 0.3)
        if make_leaf:
            leaf_id = f"leaf{counter['leaf']}"
            counter["leaf"] += 1
            nodes[leaf_id] = criterion(leaf_id, leaf_id, linear_utility(f"m_{leaf_id}"))
            return leaf_id
        agg_id = f"agg{counter['agg']}"
        counter["agg"] += 1
        arity = int(rng.integers(2, max_arity + 1))
        children = [build(depth + 1) for _ in range(arity)]
        nodes[agg_id] = aggregation(agg_id, agg_id, random_capacity(rng, children))
        return agg_id

    root = build(0)
    return CriteriaTree(nodes=nodes, root=root)


def tree_metrics(tree: CriteriaTree) -> list[str]:
    return [leaf.utility.metric_id for leaf in tree.leaves()]


def enumerate_optima(problem) -> tuple[float, set[tuple[int, ...]]]:
    """Test-side brute force: optimum value and every optimal assignment.

    Enumerates all 2^n assignments directly from the term dictionary,
    independent of the library's solver code paths.
    """
    from benchrank.bench import Sense

    n = problem.num_vars
    idx = np.arange(1 << n, dtype=np.uint64)
    values = np.zeros(1 << n, dtype=np.float64)
    for key, coeff in problem.terms.items():
        if not key:
            values += coeff
            continue
        active = np.ones(1 << n, dtype=bool)
        for var in key:
            active &= (idx >> np.uint64(var) & np.uint64(1)).astype(bool)
        values[active] += coeff
    best = values.max() if problem.sense is Sense.MAXIMIZE else values.min()
    where = np.nonzero(np.abs(values - best) <= 1e-9)[0]
    optima = {
        tuple(int(k >> q & 1) for q in range(n)) for k in where.tolist()
    }
    return float(best), optima


def singleton_targets_feasible(targets: list[float]) -> bool:
    """Hand-derived feasibility of singleton pattern targets for a 2-additive capacity.

    With nonnegative coefficients summing to one, a singleton pattern value is
    w_i + s_i where s_i is the max-pair mass at child i.  Writing C for the
    total max-pair mass: the sum rule forces C in [max(0, sum(t)-1), sum(t)/2],
    a child can absorb at most min(t_i, C) of it, and all of 2C must be
    absorbed.  The absorbable mass sum(min(t_i, C)) - 2C is concave in C with
    its unconstrained peak at the second-largest target, so clamping that peak
    into the admissible interval decides feasibility.
    """
    total = math.fsum(targets)
    if total > 2 + 1e-12:
        return False
    c_min = max(0.0, total - 1.0)
    c_max = total / 2.0
    if c_min > c_max + 1e-12:
        return False
    second = sorted(targets)[-2]
    c_star = min(max(second, c_min), c_max)
    slack = math.fsum(min(t, c_star) for t in targets) - 2 * c_star
    return slack >= -1e-12
