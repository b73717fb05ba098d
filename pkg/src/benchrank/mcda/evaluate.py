"""Evaluation of criteria trees: utilities, Choquet aggregation, intervals.

All functions here are pure; a shared tree can score many profiles
concurrently.  Scores live on the unipolar scale [0, +inf): 0 at the Bad
anchors, 1 at the Good anchors, above 1 for better-than-satisficing inputs.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from typing import Dict, Mapping, Tuple

from ..errors import ValidationError
from .model import (
    ChoquetParams,
    CriteriaTree,
    Direction,
    EvaluationResult,
    IntervalResult,
    MeasurementProfile,
    NodeKind,
    UtilityFunction,
)


def apply_utility(f: UtilityFunction, v: float) -> float:
    """Utility of raw metric value ``v``.

    Linear interpolation between breakpoints; values worse than the Bad
    anchor clamp to 0 (Bad is the saturation level from below); values past
    the best breakpoint extrapolate with the slope of the last segment.
    """
    if not math.isfinite(v):
        raise ValidationError(f"metric {f.metric_id!r}: value {v!r} is not finite")
    # Work on a preference axis where "more is better" regardless of direction.
    sign = 1.0 if f.direction is Direction.HIGHER_IS_BETTER else -1.0
    xs = [sign * bv for bv, _ in f.breakpoints]
    us = [bu for _, bu in f.breakpoints]
    key = sign * v
    if key <= xs[0]:
        return 0.0
    if key >= xs[-1]:
        slope = (us[-1] - us[-2]) / (xs[-1] - xs[-2])
        return us[-1] + (key - xs[-1]) * slope
    i = bisect_right(xs, key)
    if xs[i - 1] == key:
        return us[i - 1]
    frac = (key - xs[i - 1]) / (xs[i] - xs[i - 1])
    return us[i - 1] + frac * (us[i] - us[i - 1])


def choquet_2add(p: ChoquetParams, inputs: Mapping[str, float]) -> float:
    """2-additive Choquet aggregate of nonnegative child scores.

    Computes sum of singleton terms plus, per child pair, a min term
    (complementarity) and a max term (redundancy).
    """
    got, want = set(inputs), set(p.children)
    if got != want:
        missing, extra = sorted(want - got), sorted(got - want)
        raise ValidationError(
            f"choquet inputs mismatch: missing {missing}, unexpected {extra}"
        )
    for child, a in inputs.items():
        if not math.isfinite(a) or a < 0:
            raise ValidationError(f"input {child!r} = {a} not a nonnegative real")
    parts = [w * inputs[child] for child, w in p.singleton_weights.items()]
    parts += [w * min(inputs[l], inputs[m]) for (l, m), w in p.min_weights.items()]
    parts += [w * max(inputs[l], inputs[m]) for (l, m), w in p.max_weights.items()]
    return math.fsum(parts)


def _evaluate_values(tree: CriteriaTree, raw: Mapping[str, float]) -> Dict[str, float]:
    """Bottom-up node scores for a plain metric->value map."""
    scores: Dict[str, float] = {}

    def visit(node_id: str) -> float:
        node = tree.node(node_id)
        if node.kind is NodeKind.CRITERION:
            metric = node.utility.metric_id
            if metric not in raw:
                raise ValidationError(
                    f"leaf {node_id!r}: no measurement for metric {metric!r}"
                )
            score = apply_utility(node.utility, raw[metric])
        else:
            inputs = {child: visit(child) for child in node.choquet.children}
            try:
                score = choquet_2add(node.choquet, inputs)
            except ValidationError as exc:
                raise ValidationError(f"node {node_id!r}: {exc}") from exc
        scores[node_id] = score
        return score

    visit(tree.root)
    return scores


def evaluate_tree(tree: CriteriaTree, profile: MeasurementProfile) -> EvaluationResult:
    """Score one profile bottom-up, keeping every intermediate node score.

    Intermediate scores are part of the result on purpose: each aggregation
    node carries meaning of its own and reports display them alongside the
    root score.
    """
    scores = _evaluate_values(tree, profile.values)
    return EvaluationResult(profile.alternative_id, scores, tree.root)


def evaluate_interval(tree: CriteriaTree, profile: MeasurementProfile) -> IntervalResult:
    """Score interval per node for an interval-valued profile.

    Exploits monotonicity: the preference-worst corner of the measurement box
    gives every node its lower score, the preference-best corner its upper
    score, so two point evaluations bound all profiles inside the box.
    Metrics without an interval contribute their point value to both corners.
    """
    worst: Dict[str, float] = {}
    best: Dict[str, float] = {}
    for leaf in tree.leaves():
        metric = leaf.utility.metric_id
        lo, hi = profile.interval(metric)
        if leaf.utility.direction is Direction.HIGHER_IS_BETTER:
            worst[metric], best[metric] = lo, hi
        else:
            worst[metric], best[metric] = hi, lo
    lo_scores = _evaluate_values(tree, worst)
    hi_scores = _evaluate_values(tree, best)
    intervals = {
        node_id: (lo_scores[node_id], hi_scores[node_id]) for node_id in lo_scores
    }
    return IntervalResult(profile.alternative_id, intervals, tree.root)


def importance_and_interaction(
    p: ChoquetParams,
) -> Tuple[Dict[str, float], Dict[Tuple[str, str], float]]:
    """Shapley importance per child and interaction index per pair.

    Importance of child l is its singleton weight plus half of every pair
    weight touching it; the values are nonnegative and sum to 1.  The
    interaction index of a pair is (min weight - max weight): positive means
    the pair is complementary, negative that it is redundant.
    """
    all_pairs = [
        (a, b) if a < b else (b, a)
        for i, a in enumerate(p.children)
        for b in p.children[i + 1 :]
    ]
    importance: Dict[str, float] = {}
    for child, w in p.singleton_weights.items():
        shared = [
            (p.min_weights.get(key, 0.0) + p.max_weights.get(key, 0.0)) / 2.0
            for key in all_pairs
            if child in key
        ]
        importance[child] = math.fsum([w] + shared)
    interaction = {
        key: p.min_weights.get(key, 0.0) - p.max_weights.get(key, 0.0)
        for key in all_pairs
    }
    return importance, interaction
