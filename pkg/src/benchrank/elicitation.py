"""Preference elicitation: from ranked judgments with intensity labels to model parameters.

Two kinds of sessions exist.  A utility session ranks concrete metric values
and yields a piecewise-linear ``UtilityFunction``; a capacity session ranks
fictitious alternatives (Good on a subset of children, Bad elsewhere) and
yields ``ChoquetParams``.  Both run the same interval-scale construction:
intensity labels between consecutive ranked items are summed cumulatively and
the result is rescaled affinely so the designated anchors land on 0 and 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .errors import ConsistencyError, ValidationError
from .mcda.model import ChoquetParams, Direction, UtilityFunction

#: Capacity targets must be reproduced to this absolute tolerance.
CAPACITY_TOL = 1e-6


class IntensityLabel(Enum):
    """Verbal intensity of a preference gap, on the fixed 1..6 scale."""

    VERY_WEAK = 1
    WEAK = 2
    MODERATE = 3
    STRONG = 4
    VERY_STRONG = 5
    EXTREME = 6


_LABEL_NAMES = {
    IntensityLabel.VERY_WEAK: "VeryWeak",
    IntensityLabel.WEAK: "Weak",
    IntensityLabel.MODERATE: "Moderate",
    IntensityLabel.STRONG: "Strong",
    IntensityLabel.VERY_STRONG: "VeryStrong",
    IntensityLabel.EXTREME: "Extreme",
}
_NAME_LABELS = {name: label for label, name in _LABEL_NAMES.items()}

#: A gap of ``None`` encodes a tie (zero gain in satisfaction) and is only
#: legal in capacity sessions, where two fictitious alternatives may be
#: judged indistinguishable.
Gap = Optional[IntensityLabel]


def gap_value(gap: Gap) -> int:
    return 0 if gap is None else gap.value


def gap_name(gap: Gap) -> str:
    return "Tie" if gap is None else _LABEL_NAMES[gap]


def parse_gap(text: str) -> Gap:
    if text == "Tie":
        return None
    try:
        return _NAME_LABELS[text]
    except KeyError:
        raise ValidationError(f"unknown intensity label {text!r}") from None


@dataclass(frozen=True)
class Violation:
    """One structural or feasibility defect found in a session.

    Violations are data, not exceptions: the dialogue loop shows them to the
    decision maker so the offending answers can be revised.
    """

    code: str
    message: str
    subject: Tuple[str, ...] = ()

    def to_doc(self) -> Dict[str, object]:
        return {"code": self.code, "message": self.message, "subject": list(self.subject)}


@dataclass(frozen=True)
class UtilitySession:
    """Ranked metric values with intensity gaps, for one metric.

    ``elements`` are ordered from worst to best; ``gaps[i]`` labels the gain
    from ``elements[i]`` to ``elements[i+1]``.  The Bad anchor is the first
    element; the Good anchor must appear in the list.
    """

    metric_id: str
    elements: Tuple[float, ...]
    gaps: Tuple[IntensityLabel, ...]
    good: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(float(e) for e in self.elements))
        object.__setattr__(self, "gaps", tuple(self.gaps))
        object.__setattr__(self, "good", float(self.good))

    @property
    def bad(self) -> float:
        return self.elements[0]


@dataclass(frozen=True)
class CapacitySession:
    """Ranked fictitious alternatives with intensity gaps, for one aggregation node.

    Each alternative is the set of children on which it is Good (Bad on the
    rest): the empty set is the all-Bad alternative, the full set the
    all-Good one.  ``ranking`` goes from worst to best.
    """

    node_id: str
    children: Tuple[str, ...]
    ranking: Tuple[FrozenSet[str], ...]
    gaps: Tuple[Gap, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "ranking", tuple(frozenset(s) for s in self.ranking))
        object.__setattr__(self, "gaps", tuple(self.gaps))


def derive_value_scale(
    elements: Sequence[object],
    gaps: Sequence[Gap],
    anchor_zero: object,
    anchor_one: object,
) -> Dict[object, float]:
    """Interval-scale values for ranked elements from intensity gaps.

    Cumulative sums of the gap values are rescaled affinely so that
    ``anchor_zero`` maps to 0 and ``anchor_one`` to 1.  Only ratios of
    cumulative sums matter after anchoring, so any uniform rescaling of the
    intensity values yields the same result.
    """
    elements = list(elements)
    if len(set(elements)) != len(elements):
        raise ValidationError("ranked elements contain duplicates")
    if len(gaps) != len(elements) - 1:
        raise ValidationError(
            f"expected {len(elements) - 1} gaps for {len(elements)} elements, "
            f"got {len(gaps)}"
        )
    if anchor_zero not in elements or anchor_one not in elements:
        raise ValidationError("both anchors must appear among the ranked elements")
    if anchor_zero == anchor_one:
        raise ValidationError("anchors coincide; an interval scale needs two levels")
    cum = [0.0]
    for gap in gaps:
        cum.append(cum[-1] + gap_value(gap))
    i_zero = elements.index(anchor_zero)
    i_one = elements.index(anchor_one)
    span = cum[i_one] - cum[i_zero]
    if span <= 0:
        raise ValidationError(
            "zero total intensity between the anchors (or anchors in reverse "
            "preference order); scale is undetermined"
        )
    return {e: (cum[i] - cum[i_zero]) / span for i, e in enumerate(elements)}


# ---------------------------------------------------------------------------
# Utility sessions
# ---------------------------------------------------------------------------

def _utility_session_violations(s: UtilitySession) -> List[Violation]:
    out: List[Violation] = []
    if len(s.elements) < 2:
        out.append(Violation("too_few_elements", "need at least Bad and Good"))
        return out
    if len(s.gaps) != len(s.elements) - 1:
        out.append(
            Violation(
                "gap_count",
                f"expected {len(s.elements) - 1} gaps, got {len(s.gaps)}",
            )
        )
    if len(set(s.elements)) != len(s.elements):
        out.append(Violation("duplicate_elements", "ranked values contain duplicates"))
    if s.good not in s.elements:
        out.append(Violation("missing_good", f"Good value {s.good} not ranked"))
    elif s.good == s.bad:
        out.append(Violation("anchors_coincide", "Bad and Good are the same value"))
    increasing = all(a < b for a, b in zip(s.elements, s.elements[1:]))
    decreasing = all(a > b for a, b in zip(s.elements, s.elements[1:]))
    if not (increasing or decreasing):
        out.append(
            Violation(
                "not_monotone",
                "preference order is not monotone in the metric value; "
                "no monotone utility can represent it",
            )
        )
    for gap in s.gaps:
        if gap is None:
            out.append(
                Violation("tie_gap", "utility breakpoints must be strictly ranked")
            )
            break
    return out


def derive_utility_function(s: UtilitySession) -> UtilityFunction:
    """Build the piecewise-linear utility a session describes.

    The preference direction is inferred from whether the ranked values
    increase or decrease; the Bad anchor (first element) is pinned to 0 and
    the Good anchor to 1.
    """
    violations = _utility_session_violations(s)
    if violations:
        raise ConsistencyError(
            f"utility session for {s.metric_id!r} is inconsistent", violations
        )
    increasing = all(a < b for a, b in zip(s.elements, s.elements[1:]))
    direction = Direction.HIGHER_IS_BETTER if increasing else Direction.LOWER_IS_BETTER
    scale = derive_value_scale(s.elements, s.gaps, s.bad, s.good)
    breakpoints = tuple((e, scale[e]) for e in s.elements)
    return UtilityFunction(
        metric_id=s.metric_id,
        direction=direction,
        breakpoints=breakpoints,
        bad_index=0,
        good_index=s.elements.index(s.good),
    )


# ---------------------------------------------------------------------------
# Capacity sessions
# ---------------------------------------------------------------------------

def pattern_value(
    p: ChoquetParams, good_on: FrozenSet[str]
) -> float:
    """Choquet value of the fictitious alternative Good on ``good_on``, Bad elsewhere.

    Linear in the coefficients: singletons inside the set count fully, a min
    pair counts when both ends are inside, a max pair when at least one is.
    """
    total = [w for child, w in p.singleton_weights.items() if child in good_on]
    total += [
        w for (l, m), w in p.min_weights.items() if l in good_on and m in good_on
    ]
    total += [
        w for (l, m), w in p.max_weights.items() if l in good_on or m in good_on
    ]
    return math.fsum(total)


def _pattern_name(children: Sequence[str], good_on: FrozenSet[str]) -> str:
    if not good_on:
        return "all-Bad"
    if set(good_on) == set(children):
        return "all-Good"
    return "Good(" + ",".join(sorted(good_on)) + ")"


def _capacity_session_violations(s: CapacitySession) -> List[Violation]:
    out: List[Violation] = []
    children = set(s.children)
    if len(children) != len(s.children) or len(children) < 2:
        out.append(Violation("bad_children", "children must be >= 2 distinct ids"))
        return out
    if len(s.gaps) != len(s.ranking) - 1:
        out.append(
            Violation(
                "gap_count",
                f"expected {len(s.ranking) - 1} gaps, got {len(s.gaps)}",
            )
        )
    if len(set(s.ranking)) != len(s.ranking):
        out.append(Violation("duplicate_patterns", "a fictitious alternative is ranked twice"))
    for pattern in s.ranking:
        if not pattern <= children:
            out.append(
                Violation(
                    "unknown_child",
                    f"pattern references unknown children {sorted(pattern - children)}",
                    tuple(sorted(pattern)),
                )
            )
        elif len(pattern) not in (0, 1, 2, len(children)):
            out.append(
                Violation(
                    "bad_pattern",
                    "only all-Bad, singleton, pair and all-Good patterns are elicited",
                    tuple(sorted(pattern)),
                )
            )
    if not s.ranking or s.ranking[0] != frozenset():
        out.append(Violation("worst_not_first", "all-Bad must be ranked worst"))
    if not s.ranking or s.ranking[-1] != frozenset(children):
        out.append(Violation("best_not_last", "all-Good must be ranked best"))
    ranked = set(s.ranking)
    for child in sorted(children):
        if frozenset({child}) not in ranked:
            out.append(
                Violation(
                    "missing_singleton",
                    f"no fictitious alternative Good only on {child!r}",
                    (child,),
                )
            )
    return out


def _capacity_targets(s: CapacitySession) -> Dict[FrozenSet[str], float]:
    return derive_value_scale(
        s.ranking, s.gaps, frozenset(), frozenset(s.children)
    )


def _solve_capacity(
    children: Sequence[str],
    targets: Mapping[FrozenSet[str], float],
) -> Tuple[Optional[ChoquetParams], List[Violation]]:
    """Least-interaction nonnegative coefficients hitting the pattern targets.

    Solves a linear program: equality constraints pin each elicited pattern
    to its target value and the grand sum to one; the objective minimizes the
    total pair weight so the result stays as close to a weighted sum as the
    answers allow.  On infeasibility the constraints are made elastic and the
    patterns with residuals beyond ``CAPACITY_TOL`` come back as violations.
    """
    names = list(children)
    n = len(names)
    pairs = list(combinations(range(n), 2))
    n_vars = n + 2 * len(pairs)  # singles, then min weights, then max weights

    def pattern_row(good_on: FrozenSet[str]) -> np.ndarray:
        inside = [i for i, name in enumerate(names) if name in good_on]
        row = np.zeros(n_vars)
        for i in inside:
            row[i] = 1.0
        for k, (i, j) in enumerate(pairs):
            if i in inside and j in inside:
                row[n + k] = 1.0  # min term
            if i in inside or j in inside:
                row[n + len(pairs) + k] = 1.0  # max term
        return row

    constrained = [
        (good_on, t)
        for good_on, t in targets.items()
        if 0 < len(good_on) < n
    ]
    rows = [pattern_row(good_on) for good_on, _ in constrained]
    rows.append(np.ones(n_vars))  # coefficients sum to one
    a_eq = np.vstack(rows)
    b_eq = np.array([t for _, t in constrained] + [1.0])
    cost = np.concatenate([np.zeros(n), np.ones(2 * len(pairs))])

    res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status == 0:
        x = res.x
    else:
        # Elastic relaxation of the pattern rows to locate the clash.
        n_rows = len(constrained)
        a_el = np.hstack([a_eq, np.zeros((n_rows + 1, 2 * n_rows))])
        for r in range(n_rows):
            a_el[r, n_vars + r] = 1.0
            a_el[r, n_vars + n_rows + r] = -1.0
        cost_el = np.concatenate([np.zeros(n_vars), np.ones(2 * n_rows)])
        res_el = linprog(
            cost_el, A_eq=a_el, b_eq=b_eq, bounds=(0, None), method="highs"
        )
        if res_el.status != 0:
            return None, [
                Violation("infeasible", "capacity system is infeasible", ())
            ]
        x = res_el.x[:n_vars]
        violations = []
        for r, (good_on, t) in enumerate(constrained):
            resid = res_el.x[n_vars + r] - res_el.x[n_vars + n_rows + r]
            if abs(resid) > CAPACITY_TOL:
                violations.append(
                    Violation(
                        "target_unreachable",
                        f"pattern {_pattern_name(names, good_on)} misses its target "
                        f"{t:.6f} by {resid:+.6f}",
                        tuple(sorted(good_on)),
                    )
                )
        if violations:
            return None, violations

    singles = {name: max(0.0, float(x[i])) for i, name in enumerate(names)}
    mins = {}
    maxs = {}
    for k, (i, j) in enumerate(pairs):
        key = (names[i], names[j])
        w_min = max(0.0, float(x[n + k]))
        w_max = max(0.0, float(x[n + len(pairs) + k]))
        if w_min:
            mins[key] = w_min
        if w_max:
            maxs[key] = w_max
    # Absorb solver round-off into the largest singleton so the exact
    # sum-to-one invariant holds.
    total = math.fsum(list(singles.values()) + list(mins.values()) + list(maxs.values()))
    top = max(singles, key=lambda name: singles[name])
    singles[top] += 1.0 - total
    if singles[top] < 0:
        return None, [Violation("infeasible", "round-off repair failed", ())]
    return ChoquetParams(singles, mins, maxs), []


def pair_capacity_closed_form(t_first: float, t_second: float) -> ChoquetParams:
    """Two-child capacity from the two singleton targets, in closed form.

    With targets summing above 1 the surplus becomes a max (redundancy)
    weight; below 1 the deficit becomes a min (complementarity) weight.
    Kept separate from the linear-program route so the two can check each
    other.
    """
    for t in (t_first, t_second):
        if not 0.0 <= t <= 1.0:
            raise ValidationError(f"singleton target {t} outside [0, 1]")
    excess = t_first + t_second - 1.0
    if excess > 0:
        singles = {"first": t_first - excess, "second": t_second - excess}
        return ChoquetParams(singles, {}, {("first", "second"): excess})
    singles = {"first": t_first, "second": t_second}
    if excess < 0:
        return ChoquetParams(singles, {("first", "second"): -excess}, {})
    return ChoquetParams(singles, {}, {})


def derive_capacity(s: CapacitySession) -> ChoquetParams:
    """Choquet coefficients reproducing the session's ranked targets.

    Raises ``ConsistencyError`` with the violated pattern constraints when
    the answers are structurally broken or admit no nonnegative sum-to-one
    solution within ``CAPACITY_TOL``.
    """
    structural = _capacity_session_violations(s)
    if structural:
        raise ConsistencyError(
            f"capacity session for node {s.node_id!r} is inconsistent", structural
        )
    targets = _capacity_targets(s)
    params, violations = _solve_capacity(s.children, targets)
    if params is None:
        raise ConsistencyError(
            f"capacity session for node {s.node_id!r} has no feasible model",
            violations,
        )
    for good_on, t in targets.items():
        if abs(pattern_value(params, good_on) - t) > CAPACITY_TOL:
            raise ConsistencyError(
                f"capacity session for node {s.node_id!r}: solver missed target",
                [
                    Violation(
                        "target_unreachable",
                        f"pattern {_pattern_name(s.children, good_on)} not reproduced",
                        tuple(sorted(good_on)),
                    )
                ],
            )
    return params


def check_consistency(s: UtilitySession | CapacitySession) -> List[Violation]:
    """Structural (and, for capacities, feasibility) violations of a session.

    Never mutates the session and never raises: an inconsistent session is a
    normal state of the elicitation dialogue.
    """
    if isinstance(s, UtilitySession):
        return _utility_session_violations(s)
    violations = _capacity_session_violations(s)
    if violations:
        return violations
    try:
        targets = _capacity_targets(s)
    except ValidationError as exc:
        return [Violation("bad_scale", str(exc))]
    _, lp_violations = _solve_capacity(s.children, targets)
    return lp_violations


# ---------------------------------------------------------------------------
# Session documents (shared by CLI batch mode and the interactive UI)
# ---------------------------------------------------------------------------

SESSION_SCHEMA_VERSION = 1


def session_to_doc(s: UtilitySession | CapacitySession) -> Dict[str, object]:
    if isinstance(s, UtilitySession):
        return {
            "schema_version": SESSION_SCHEMA_VERSION,
            "kind": "utility",
            "metric_id": s.metric_id,
            "elements": list(s.elements),
            "good": s.good,
            "gaps": [gap_name(g) for g in s.gaps],
        }
    return {
        "schema_version": SESSION_SCHEMA_VERSION,
        "kind": "capacity",
        "node_id": s.node_id,
        "children": list(s.children),
        "ranking": [sorted(p) for p in s.ranking],
        "gaps": [gap_name(g) for g in s.gaps],
    }


def session_from_doc(doc: Mapping[str, object]) -> UtilitySession | CapacitySession:
    version = doc.get("schema_version")
    if version != SESSION_SCHEMA_VERSION:
        raise ValidationError(
            f"unsupported session schema_version {version!r}; "
            f"expected {SESSION_SCHEMA_VERSION}"
        )
    kind = doc.get("kind")
    gaps = tuple(parse_gap(g) for g in doc.get("gaps", []))
    if kind == "utility":
        strict: List[IntensityLabel] = []
        for g in gaps:
            if g is None:
                raise ValidationError("utility sessions cannot contain ties")
            strict.append(g)
        return UtilitySession(
            metric_id=str(doc["metric_id"]),
            elements=tuple(doc["elements"]),
            gaps=tuple(strict),
            good=float(doc["good"]),
        )
    if kind == "capacity":
        return CapacitySession(
            node_id=str(doc["node_id"]),
            children=tuple(doc["children"]),
            ranking=tuple(frozenset(p) for p in doc["ranking"]),
            gaps=gaps,
        )
    raise ValidationError(f"unknown session kind {kind!r}")
