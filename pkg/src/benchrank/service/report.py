"""Profiles from records, ranked evaluation reports, rendering.

The report is the single place ranking happens: rows are ordered by root
score and the rendered table, the machine document and the HTTP payload all
derive from the same canonical structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..jsonutil import canonical_json
from ..mcda import CriteriaTree, MeasurementProfile, evaluate_tree
from .records import BenchmarkRecord, compute_efficiency

_AGGREGATORS = {
    "mean": lambda xs: math.fsum(xs) / len(xs),
    "max": max,
    "min": min,
}


def build_profiles(
    tree: CriteriaTree, records: Sequence[BenchmarkRecord]
) -> Tuple[List[MeasurementProfile], List[str]]:
    """Collapse records into one profile per alternative.

    Repetitions of a metric aggregate by the tree's declared per-metric rule
    (mean unless stated otherwise).  An alternative missing any leaf metric
    is skipped with a warning instead of failing the whole report.
    """
    metrics = tree.metric_ids()
    by_alternative: Dict[str, Dict[str, List[float]]] = {}
    for record in records:
        bucket = by_alternative.setdefault(record.alternative_id, {})
        for metric, value in record.metrics.items():
            bucket.setdefault(metric, []).append(value)
    profiles: List[MeasurementProfile] = []
    warnings: List[str] = []
    for alternative in sorted(by_alternative):
        bucket = by_alternative[alternative]
        missing = [m for m in metrics if not bucket.get(m)]
        if missing:
            warnings.append(
                f"alternative {alternative!r} lacks metrics {missing}; excluded"
            )
            continue
        values = {
            m: _AGGREGATORS[tree.aggregation_rule(m)](bucket[m]) for m in metrics
        }
        profiles.append(MeasurementProfile(alternative, values))
    return profiles, warnings


@dataclass(frozen=True)
class ReportRow:
    rank: int
    alternative_id: str
    root_score: float
    scores: Mapping[str, float]
    efficiency: Optional[float] = None


@dataclass(frozen=True)
class RankedReport:
    model_root: str
    rows: Tuple[ReportRow, ...]
    warnings: Tuple[str, ...]
    node_order: Tuple[str, ...]

    def to_doc(self) -> Dict[str, object]:
        return {
            "root": self.model_root,
            "columns": list(self.node_order),
            "ranking": [
                {
                    "rank": row.rank,
                    "alternative_id": row.alternative_id,
                    "root_score": row.root_score,
                    "scores": dict(sorted(row.scores.items())),
                    **(
                        {"efficiency_per_joule": row.efficiency}
                        if row.efficiency is not None
                        else {}
                    ),
                }
                for row in self.rows
            ],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return canonical_json(self.to_doc())

    def to_markdown(self) -> str:
        header = ["rank", "alternative", *self.node_order]
        lines = [
            "| " + " | ".join(header) + " |",
            "|" + "|".join("---" for _ in header) + "|",
        ]
        for row in self.rows:
            cells = [str(row.rank), row.alternative_id]
            cells += [f"{row.scores[node]:.4f}" for node in self.node_order]
            lines.append("| " + " | ".join(cells) + " |")
        for warning in self.warnings:
            lines.append(f"> warning: {warning}")
        return "\n".join(lines) + "\n"


def _node_order(tree: CriteriaTree) -> Tuple[str, ...]:
    """Root first, then depth-first child order: the display order of columns."""
    order: List[str] = []

    def visit(node_id: str) -> None:
        order.append(node_id)
        for child in tree.children(node_id):
            visit(child)

    visit(tree.root)
    return tuple(order)


def evaluate_and_report(
    tree: CriteriaTree,
    records: Sequence[BenchmarkRecord] = (),
    profiles: Sequence[MeasurementProfile] = (),
    energy_by_alternative: Optional[Mapping[str, float]] = None,
) -> RankedReport:
    """Rank alternatives by root score; ties keep alternative-id order.

    Alternatives may come pre-profiled or as raw records (or both; profiles
    win on id collision).  When an energy cost is known for an alternative,
    the root score per joule is reported alongside.
    """
    built, warnings = build_profiles(tree, records)
    by_id = {p.alternative_id: p for p in built}
    for profile in profiles:
        by_id[profile.alternative_id] = profile
    if not by_id:
        warnings = warnings + ["no evaluable alternatives"]
    results = []
    for alternative in sorted(by_id):
        evaluation = evaluate_tree(tree, by_id[alternative])
        results.append((alternative, evaluation))
    results.sort(key=lambda pair: (-pair[1].root_score, pair[0]))
    rows = []
    for position, (alternative, evaluation) in enumerate(results, start=1):
        energy = (energy_by_alternative or {}).get(alternative)
        rows.append(
            ReportRow(
                rank=position,
                alternative_id=alternative,
                root_score=evaluation.root_score,
                scores=dict(evaluation.scores),
                efficiency=(
                    compute_efficiency(evaluation.root_score, energy)
                    if energy is not None
                    else None
                ),
            )
        )
    return RankedReport(
        model_root=tree.root,
        rows=tuple(rows),
        warnings=tuple(warnings),
        node_order=_node_order(tree),
    )
