"""Model file format: one JSON document for the whole criteria tree.

The document carries a mandatory ``schema_version`` and round-trips
value-identically: load(save(tree)) == tree.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict

from ..errors import ValidationError
from ..jsonutil import canonical_json
from .model import (
    ChoquetParams,
    CriteriaTree,
    Node,
    NodeKind,
    UtilityFunction,
)

SCHEMA_VERSION = 1


def _utility_to_doc(u: UtilityFunction) -> Dict[str, Any]:
    return {
        "metric_id": u.metric_id,
        "direction": u.direction.value,
        "breakpoints": [[v, util] for v, util in u.breakpoints],
        "bad_index": u.bad_index,
        "good_index": u.good_index,
    }


def _utility_from_doc(doc: Dict[str, Any]) -> UtilityFunction:
    return UtilityFunction(
        metric_id=doc["metric_id"],
        direction=doc["direction"],
        breakpoints=tuple((v, u) for v, u in doc["breakpoints"]),
        bad_index=int(doc["bad_index"]),
        good_index=int(doc["good_index"]),
    )


def _choquet_to_doc(p: ChoquetParams) -> Dict[str, Any]:
    return {
        "singletons": dict(p.singleton_weights),
        "min_pairs": [
            {"pair": list(key), "weight": w} for key, w in sorted(p.min_weights.items())
        ],
        "max_pairs": [
            {"pair": list(key), "weight": w} for key, w in sorted(p.max_weights.items())
        ],
    }


def _choquet_from_doc(doc: Dict[str, Any]) -> ChoquetParams:
    return ChoquetParams(
        singleton_weights=doc["singletons"],
        min_weights={tuple(e["pair"]): e["weight"] for e in doc.get("min_pairs", [])},
        max_weights={tuple(e["pair"]): e["weight"] for e in doc.get("max_pairs", [])},
    )


def model_to_doc(tree: CriteriaTree) -> Dict[str, Any]:
    nodes = []
    for node in tree.nodes.values():
        entry: Dict[str, Any] = {
            "id": node.id,
            "kind": node.kind.value,
            "label": node.label,
        }
        if node.kind is NodeKind.CRITERION:
            entry["utility"] = _utility_to_doc(node.utility)
        else:
            entry["choquet"] = _choquet_to_doc(node.choquet)
        nodes.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "scope_label": tree.scope_label,
        "root": tree.root,
        "metric_aggregation": dict(tree.metric_aggregation),
        "nodes": nodes,
    }


def model_from_doc(doc: Dict[str, Any]) -> CriteriaTree:
    if not isinstance(doc, dict):
        raise ValidationError("model document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValidationError(
            f"unsupported model schema_version {version!r}; expected {SCHEMA_VERSION}"
        )
    nodes: Dict[str, Node] = {}
    for entry in doc.get("nodes", []):
        kind = NodeKind(entry["kind"])
        if kind is NodeKind.CRITERION:
            payload: object = _utility_from_doc(entry["utility"])
        else:
            payload = _choquet_from_doc(entry["choquet"])
        node = Node(entry["id"], kind, entry.get("label", entry["id"]), payload)
        if node.id in nodes:
            raise ValidationError(f"duplicate node id {node.id!r} in model document")
        nodes[node.id] = node
    return CriteriaTree(
        nodes=nodes,
        root=doc["root"],
        scope_label=doc.get("scope_label", ""),
        metric_aggregation=doc.get("metric_aggregation", {}),
    )


def save_model(tree: CriteriaTree, path: str | Path) -> None:
    Path(path).write_text(canonical_json(model_to_doc(tree)), encoding="utf-8")


def load_model(path: str | Path) -> CriteriaTree:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"model file {path}: invalid JSON ({exc})") from exc
    return model_from_doc(doc)
