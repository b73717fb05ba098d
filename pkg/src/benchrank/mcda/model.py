"""Hierarchical multi-criteria model types.

A model is a tree whose leaves normalize raw benchmark metrics through
piecewise-linear utility functions and whose internal nodes aggregate child
scores with 2-additive Choquet coefficients.  All types are immutable after
construction and validate their invariants eagerly, so an instance that
exists is an instance that is safe to evaluate concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Tuple

from ..errors import ValidationError

#: Absolute tolerance on the sum-to-one constraint of Choquet coefficients.
WEIGHT_SUM_TOL = 1e-9


class Direction(str, Enum):
    """Preference direction of a raw metric."""

    HIGHER_IS_BETTER = "higher_is_better"
    LOWER_IS_BETTER = "lower_is_better"


class NodeKind(str, Enum):
    CRITERION = "criterion"
    AGGREGATION = "aggregation"


def _pair(a: str, b: str) -> Tuple[str, str]:
    """Canonical unordered pair key."""
    if a == b:
        raise ValidationError(f"pair weight references the same child twice: {a!r}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class UtilityFunction:
    """Piecewise-linear marginal utility anchored at a Bad and a Good value.

    ``breakpoints`` are ordered from worst to best; utilities increase
    strictly along that order.  The Bad anchor maps to exactly 0 and the
    Good anchor to exactly 1.  The utility scale is unipolar: values worse
    than Bad saturate at 0, while values past the best breakpoint keep
    growing with the slope of the last segment, so the model stays usable
    when future machines exceed everything seen at elicitation time.
    """

    metric_id: str
    direction: Direction
    breakpoints: Tuple[Tuple[float, float], ...]
    bad_index: int
    good_index: int

    def __post_init__(self) -> None:
        bps = tuple((float(v), float(u)) for v, u in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "direction", Direction(self.direction))
        if len(bps) < 2:
            raise ValidationError(
                f"utility for {self.metric_id!r} needs at least 2 breakpoints"
            )
        for v, u in bps:
            if not (math.isfinite(v) and math.isfinite(u)):
                raise ValidationError(f"non-finite breakpoint in {self.metric_id!r}")
            if u < 0:
                raise ValidationError(
                    f"negative utility {u} in {self.metric_id!r}: scale is unipolar"
                )
        values = [v for v, _ in bps]
        if self.direction is Direction.HIGHER_IS_BETTER:
            ordered = all(a < b for a, b in zip(values, values[1:]))
        else:
            ordered = all(a > b for a, b in zip(values, values[1:]))
        if not ordered:
            raise ValidationError(
                f"breakpoints of {self.metric_id!r} not strictly ordered by preference"
            )
        utils = [u for _, u in bps]
        if not all(a < b for a, b in zip(utils, utils[1:])):
            raise ValidationError(
                f"utilities of {self.metric_id!r} not strictly increasing"
            )
        if not (0 <= self.bad_index < len(bps) and 0 <= self.good_index < len(bps)):
            raise ValidationError(f"anchor index out of range in {self.metric_id!r}")
        if bps[self.bad_index][1] != 0.0:
            raise ValidationError(f"Bad anchor of {self.metric_id!r} must map to 0")
        if bps[self.good_index][1] != 1.0:
            raise ValidationError(f"Good anchor of {self.metric_id!r} must map to 1")

    @property
    def bad_value(self) -> float:
        return self.breakpoints[self.bad_index][0]

    @property
    def good_value(self) -> float:
        return self.breakpoints[self.good_index][0]


@dataclass(frozen=True)
class ChoquetParams:
    """Coefficients of a 2-additive Choquet aggregation over named children.

    ``singleton_weights`` must list every child (zero weights are fine);
    ``min_weights``/``max_weights`` hold the pairwise complementarity and
    redundancy coefficients keyed by unordered child pairs.  All
    coefficients are nonnegative and the grand total is 1: this pins the
    aggregation to output 0 on all-Bad inputs and 1 on all-Good inputs.
    A sum off by more than ``WEIGHT_SUM_TOL`` is rejected, never silently
    renormalized, because a bad sum usually means an elicitation bug.
    """

    singleton_weights: Mapping[str, float]
    min_weights: Mapping[Tuple[str, str], float] = field(default_factory=dict)
    max_weights: Mapping[Tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        # canonical child order: alphabetical, so serialization round-trips
        # and report columns never depend on construction order
        singles = {
            str(k): float(v) for k, v in sorted(dict(self.singleton_weights).items())
        }
        mins = {_pair(*k): float(v) for k, v in dict(self.min_weights).items()}
        maxs = {_pair(*k): float(v) for k, v in dict(self.max_weights).items()}
        object.__setattr__(self, "singleton_weights", singles)
        object.__setattr__(self, "min_weights", mins)
        object.__setattr__(self, "max_weights", maxs)
        if len(singles) < 2:
            raise ValidationError("an aggregation needs at least 2 children")
        for name, weights in (("singleton", singles), ("min", mins), ("max", maxs)):
            for key, w in weights.items():
                if not math.isfinite(w) or w < 0:
                    raise ValidationError(f"{name} weight {key!r} = {w} is invalid")
        for key in set(mins) | set(maxs):
            for child in key:
                if child not in singles:
                    raise ValidationError(
                        f"pair {key!r} references unknown child {child!r}"
                    )
        total = math.fsum(
            list(singles.values()) + list(mins.values()) + list(maxs.values())
        )
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(
                f"Choquet coefficients sum to {total!r}, expected 1 "
                f"(tolerance {WEIGHT_SUM_TOL}); refusing to renormalize"
            )

    @property
    def children(self) -> Tuple[str, ...]:
        return tuple(self.singleton_weights)

    def pairs(self) -> Iterable[Tuple[str, str]]:
        return sorted(set(self.min_weights) | set(self.max_weights))


@dataclass(frozen=True)
class Node:
    """One tree node: a metric criterion (leaf) or a Choquet aggregation."""

    id: str
    kind: NodeKind
    label: str
    payload: object  # UtilityFunction for criteria, ChoquetParams for aggregations

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", NodeKind(self.kind))
        expected = (
            UtilityFunction if self.kind is NodeKind.CRITERION else ChoquetParams
        )
        if not isinstance(self.payload, expected):
            raise ValidationError(
                f"node {self.id!r} of kind {self.kind.value} needs a "
                f"{expected.__name__} payload"
            )

    @property
    def utility(self) -> UtilityFunction:
        if self.kind is not NodeKind.CRITERION:
            raise ValidationError(f"node {self.id!r} is not a criterion")
        return self.payload  # type: ignore[return-value]

    @property
    def choquet(self) -> ChoquetParams:
        if self.kind is not NodeKind.AGGREGATION:
            raise ValidationError(f"node {self.id!r} is not an aggregation")
        return self.payload  # type: ignore[return-value]


def criterion(node_id: str, label: str, utility: UtilityFunction) -> Node:
    return Node(node_id, NodeKind.CRITERION, label, utility)


def aggregation(node_id: str, label: str, params: ChoquetParams) -> Node:
    return Node(node_id, NodeKind.AGGREGATION, label, params)


@dataclass(frozen=True)
class CriteriaTree:
    """A complete scoring model: one root, aggregations inside, criteria at leaves.

    ``scope_label`` is free text naming which class of backends the model is
    meant to compare; the engine does not enforce comparability, it only
    records the operator's intent.
    """

    nodes: Mapping[str, Node]
    root: str
    scope_label: str = ""
    #: Per-metric rule for collapsing repeated benchmark records into the one
    #: profile value a leaf consumes ("mean", "max" or "min"); default mean.
    metric_aggregation: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        nodes = dict(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "metric_aggregation", dict(self.metric_aggregation))
        for node_id, node in nodes.items():
            if node_id != node.id:
                raise ValidationError(f"node {node.id!r} keyed as {node_id!r}")
        if self.root not in nodes:
            raise ValidationError(f"root {self.root!r} is not a node")
        for rule in self.metric_aggregation.values():
            if rule not in ("mean", "max", "min"):
                raise ValidationError(f"unknown record aggregation rule {rule!r}")
        # Parent bookkeeping: every child id must exist, belong to exactly one
        # aggregation, and everything must hang off the single root.
        parent: dict[str, str] = {}
        for node in nodes.values():
            if node.kind is not NodeKind.AGGREGATION:
                continue
            for child in node.choquet.children:
                if child not in nodes:
                    raise ValidationError(
                        f"aggregation {node.id!r} references missing child {child!r}"
                    )
                if child in parent:
                    raise ValidationError(
                        f"node {child!r} has two parents: "
                        f"{parent[child]!r} and {node.id!r}"
                    )
                parent[child] = node.id
        if self.root in parent:
            raise ValidationError(f"root {self.root!r} has a parent")
        orphans = set(nodes) - set(parent) - {self.root}
        if orphans:
            raise ValidationError(f"nodes not connected to the root: {sorted(orphans)}")
        # Reachability from the root doubles as the cycle check: with unique
        # parents and no orphans, unreachable nodes would imply a cycle.
        seen: set[str] = set()
        stack = [self.root]
        while stack:
            node_id = stack.pop()
            if node_id in seen:
                raise ValidationError(f"cycle detected at node {node_id!r}")
            seen.add(node_id)
            node = nodes[node_id]
            if node.kind is NodeKind.AGGREGATION:
                stack.extend(node.choquet.children)
        if seen != set(nodes):
            raise ValidationError("tree is not fully connected")

    def node(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise ValidationError(f"unknown node {node_id!r}") from None

    def leaves(self) -> Tuple[Node, ...]:
        return tuple(
            n for n in self.nodes.values() if n.kind is NodeKind.CRITERION
        )

    def metric_ids(self) -> Tuple[str, ...]:
        out: list[str] = []
        for leaf in self.leaves():
            if leaf.utility.metric_id not in out:
                out.append(leaf.utility.metric_id)
        return tuple(out)

    def children(self, node_id: str) -> Tuple[str, ...]:
        node = self.node(node_id)
        if node.kind is NodeKind.AGGREGATION:
            return node.choquet.children
        return ()

    def aggregation_rule(self, metric_id: str) -> str:
        return self.metric_aggregation.get(metric_id, "mean")


@dataclass(frozen=True)
class MeasurementProfile:
    """Raw metric values (and optional intervals) for one alternative."""

    alternative_id: str
    values: Mapping[str, float]
    intervals: Mapping[str, Tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        values = {str(k): float(v) for k, v in dict(self.values).items()}
        intervals = {
            str(k): (float(lo), float(hi))
            for k, (lo, hi) in dict(self.intervals).items()
        }
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "intervals", intervals)
        for metric, v in values.items():
            if not math.isfinite(v):
                raise ValidationError(f"non-finite value for metric {metric!r}")
        for metric, (lo, hi) in intervals.items():
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValidationError(f"non-finite interval for metric {metric!r}")
            if lo > hi:
                raise ValidationError(
                    f"interval for metric {metric!r} has lo {lo} > hi {hi}"
                )

    def value(self, metric_id: str) -> float:
        if metric_id in self.values:
            return self.values[metric_id]
        raise ValidationError(
            f"profile {self.alternative_id!r} has no value for metric {metric_id!r}"
        )

    def interval(self, metric_id: str) -> Tuple[float, float]:
        """Interval for a metric; degenerate at the point value if none given."""
        if metric_id in self.intervals:
            return self.intervals[metric_id]
        v = self.value(metric_id)
        return (v, v)


@dataclass(frozen=True)
class EvaluationResult:
    """Per-node scores of one profile against one tree."""

    alternative_id: str
    scores: Mapping[str, float]
    root: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "scores", dict(self.scores))

    @property
    def root_score(self) -> float:
        return self.scores[self.root]


@dataclass(frozen=True)
class IntervalResult:
    """Per-node score intervals of one interval-valued profile."""

    alternative_id: str
    intervals: Mapping[str, Tuple[float, float]]
    root: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "intervals", dict(self.intervals))

    @property
    def root_interval(self) -> Tuple[float, float]:
        return self.intervals[self.root]


def two_level_tree(
    root_id: str,
    root_label: str,
    params: ChoquetParams,
    leaves: Iterable[Node],
    scope_label: str = "",
    metric_aggregation: Optional[Mapping[str, str]] = None,
) -> CriteriaTree:
    """Convenience constructor for the common one-aggregation-over-leaves shape."""
    nodes = {leaf.id: leaf for leaf in leaves}
    nodes[root_id] = aggregation(root_id, root_label, params)
    return CriteriaTree(
        nodes=nodes,
        root=root_id,
        scope_label=scope_label,
        metric_aggregation=metric_aggregation or {},
    )
