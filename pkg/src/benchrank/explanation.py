"""Contrastive explanations: why one alternative beats (or trails) a reference.

The score difference against a reference profile is decomposed into exact
Shapley contributions of a node's children, then pushed down the hierarchy
proportionally, so that at every aggregation node the child contributions sum
to the node's own contribution and the whole tree accounts for the root
difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from math import factorial
from typing import Dict, Mapping, Optional, Sequence

from .errors import ValidationError
from .mcda.evaluate import choquet_2add, evaluate_tree
from .mcda.model import (
    ChoquetParams,
    CriteriaTree,
    Direction,
    MeasurementProfile,
    NodeKind,
)

#: Exact Shapley enumeration is refused beyond this arity; hierarchies keep
#: node arity small by design, and sampling would make explanations
#: nondeterministic.
MAX_EXACT_CHILDREN = 12

#: Contributions smaller than this are treated as zero when distributing
#: down the hierarchy.
_NEGLIGIBLE = 1e-15


class ReferenceKind(str, Enum):
    WORST = "worst"
    IDEAL = "ideal"


@dataclass(frozen=True)
class ReferenceProfile:
    """The profile an explanation compares against.

    ``worst`` sits at the Bad anchor of every metric; ``ideal`` is the
    componentwise preference-best over a concrete evaluation set (the
    unipolar scale has no global best, so "ideal" is always relative to the
    alternatives on the table).
    """

    kind: ReferenceKind
    values: Mapping[str, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ReferenceKind(self.kind))
        object.__setattr__(self, "values", dict(self.values))

    def as_profile(self) -> MeasurementProfile:
        return MeasurementProfile(f"reference:{self.kind.value}", self.values)


@dataclass(frozen=True)
class ExplanationReport:
    """Per-node contributions to the score difference vs the reference.

    ``percentages`` are contributions as percent of the root contribution;
    they are ``None`` when the root contribution is zero (the decomposition
    still holds, the shares are just undefined).
    """

    alternative_id: str
    reference_kind: ReferenceKind
    contributions: Mapping[str, float]
    percentages: Mapping[str, Optional[float]]
    root: str
    root_contribution: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "contributions", dict(self.contributions))
        object.__setattr__(self, "percentages", dict(self.percentages))

    def to_doc(self) -> Dict[str, object]:
        return {
            "alternative_id": self.alternative_id,
            "reference": self.reference_kind.value,
            "root": self.root,
            "root_contribution": self.root_contribution,
            "contributions": dict(sorted(self.contributions.items())),
            "percentages": dict(sorted(self.percentages.items())),
        }


def reference_profile(
    kind: ReferenceKind | str,
    tree: CriteriaTree,
    evaluation_set: Sequence[MeasurementProfile] = (),
) -> ReferenceProfile:
    """Build the worst or ideal reference profile for a tree.

    Worst needs no alternatives (it reads the Bad anchors off the leaves);
    ideal picks, per metric, the preference-best value present in the
    evaluation set and therefore requires a nonempty set.
    """
    kind = ReferenceKind(kind)
    values: Dict[str, float] = {}
    if kind is ReferenceKind.WORST:
        for leaf in tree.leaves():
            values[leaf.utility.metric_id] = leaf.utility.bad_value
        return ReferenceProfile(kind, values)
    if not evaluation_set:
        raise ValidationError("ideal reference needs a nonempty evaluation set")
    for leaf in tree.leaves():
        metric = leaf.utility.metric_id
        observed = [p.value(metric) for p in evaluation_set]
        if leaf.utility.direction is Direction.HIGHER_IS_BETTER:
            values[metric] = max(observed)
        else:
            values[metric] = min(observed)
    return ReferenceProfile(kind, values)


def shapley_contributions(
    p: ChoquetParams,
    scores: Mapping[str, float],
    reference_scores: Mapping[str, float],
) -> Dict[str, float]:
    """Exact Shapley contribution of each child to F(scores) - F(reference).

    The coalitional game sets a coalition's worth to the aggregate with
    coalition members at their actual scores and everyone else at the
    reference, minus the all-reference aggregate.  Efficiency guarantees the
    contributions sum to the aggregate difference.  Exact enumeration over
    all coalitions; refused above ``MAX_EXACT_CHILDREN`` children.
    """
    children = list(p.children)
    n = len(children)
    if n > MAX_EXACT_CHILDREN:
        raise ValidationError(
            f"exact Shapley enumeration refused for {n} children "
            f"(cap {MAX_EXACT_CHILDREN}); split the aggregation node instead"
        )
    base = choquet_2add(p, dict(reference_scores))
    worth = [0.0] * (1 << n)
    for mask in range(1 << n):
        inputs = {
            child: (scores[child] if mask >> i & 1 else reference_scores[child])
            for i, child in enumerate(children)
        }
        worth[mask] = choquet_2add(p, inputs) - base
    coeff = [
        factorial(size) * factorial(n - size - 1) / factorial(n)
        for size in range(n)
    ]
    out: Dict[str, float] = {}
    for i, child in enumerate(children):
        parts = []
        for mask in range(1 << n):
            if mask >> i & 1:
                continue
            size = bin(mask).count("1")
            parts.append(coeff[size] * (worth[mask | (1 << i)] - worth[mask]))
        out[child] = math.fsum(parts)
    return out


def hierarchical_explanation(
    tree: CriteriaTree,
    alternative: MeasurementProfile,
    reference_kind: ReferenceKind | str = ReferenceKind.WORST,
    evaluation_set: Sequence[MeasurementProfile] = (),
) -> ExplanationReport:
    """Contribution of every node to the root score difference vs a reference.

    Top-down: the root difference is split over the root's children by exact
    Shapley values; each internal child then distributes its contribution to
    its own children proportionally to their Shapley values inside that
    subtree.  A subtree whose score did not move gets (and passes down)
    exactly zero.
    """
    reference = reference_profile(reference_kind, tree, evaluation_set)
    eval_alt = evaluate_tree(tree, alternative)
    eval_ref = evaluate_tree(tree, reference.as_profile())
    contributions: Dict[str, float] = {}
    root_delta = eval_alt.root_score - eval_ref.root_score
    contributions[tree.root] = root_delta

    def distribute(node_id: str, amount: float) -> None:
        node = tree.node(node_id)
        if node.kind is not NodeKind.AGGREGATION:
            return
        params = node.choquet
        x = {c: eval_alt.scores[c] for c in params.children}
        r = {c: eval_ref.scores[c] for c in params.children}
        shapley = shapley_contributions(params, x, r)
        total = math.fsum(shapley.values())
        for child in params.children:
            if abs(total) <= _NEGLIGIBLE:
                share = 0.0
            else:
                share = amount * (shapley[child] / total)
            contributions[child] = share
            distribute(child, share)

    distribute(tree.root, root_delta)
    percentages: Dict[str, Optional[float]] = {}
    for node_id, contribution in contributions.items():
        if abs(root_delta) <= _NEGLIGIBLE:
            percentages[node_id] = None
        else:
            percentages[node_id] = 100.0 * contribution / root_delta
    return ExplanationReport(
        alternative_id=alternative.alternative_id,
        reference_kind=reference.kind,
        contributions=contributions,
        percentages=percentages,
        root=tree.root,
        root_contribution=root_delta,
    )
