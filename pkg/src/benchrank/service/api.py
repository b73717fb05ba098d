"""HTTP API over the store and the scoring engine.

One engine serves every surface: the CLI, this API and the browser UI all
call the same functions, and machine documents are rendered through the
canonical JSON writer so equal inputs produce byte-identical outputs
everywhere.  What-if requests build a transient model copy and never touch
the store.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from fastapi import FastAPI, HTTPException, Query, Response
from pydantic import BaseModel, Field

from ..elicitation import (
    UtilitySession,
    check_consistency,
    derive_capacity,
    derive_utility_function,
    parse_gap,
    session_from_doc,
)
from ..errors import ConsistencyError, ValidationError
from ..explanation import hierarchical_explanation, reference_profile
from ..jsonutil import canonical_json
from ..mcda import (
    CriteriaTree,
    MeasurementProfile,
    Node,
    NodeKind,
    evaluate_interval,
    importance_and_interaction,
    model_from_doc,
    model_to_doc,
)
from ..mcda.io import _choquet_from_doc, _utility_from_doc
from .records import parse_ingest_document
from .report import build_profiles, evaluate_and_report
from .store import StaleSessionError, Store

API_PREFIX = "/api/v1"


def _canonical(doc: Mapping[str, Any]) -> Response:
    return Response(content=canonical_json(doc), media_type="application/json")


class ProfileBody(BaseModel):
    alternative_id: str
    values: Dict[str, float]
    intervals: Dict[str, List[float]] = Field(default_factory=dict)

    def to_profile(self) -> MeasurementProfile:
        return MeasurementProfile(
            self.alternative_id,
            self.values,
            intervals={k: (lo, hi) for k, (lo, hi) in self.intervals.items()},
        )


class EvaluateBody(BaseModel):
    model_id: str
    profiles: List[ProfileBody] = Field(default_factory=list)
    use_records: bool = True


class ExplainBody(BaseModel):
    model_id: str
    alternative_id: str
    reference: str = "worst"
    profiles: List[ProfileBody] = Field(default_factory=list)
    use_records: bool = True


class OverrideBody(BaseModel):
    node_id: str
    choquet: Optional[Dict[str, Any]] = None
    utility: Optional[Dict[str, Any]] = None


class WhatIfBody(BaseModel):
    model_id: str
    overrides: List[OverrideBody] = Field(default_factory=list)
    profiles: List[ProfileBody] = Field(default_factory=list)
    use_records: bool = True


class SessionCreateBody(BaseModel):
    kind: str
    metric_id: Optional[str] = None
    elements: List[float] = Field(default_factory=list)
    good: Optional[float] = None
    node_id: Optional[str] = None
    children: List[str] = Field(default_factory=list)
    include_pairs: bool = True


class SessionAnswerBody(BaseModel):
    version: int
    ranking: Optional[List[List[str]]] = None
    gaps: Optional[List[Optional[str]]] = None


class SessionFinalizeBody(BaseModel):
    version: int
    model_id: str
    node_id: Optional[str] = None


def _capacity_patterns(children: List[str], include_pairs: bool) -> List[List[str]]:
    patterns: List[List[str]] = [[]]
    patterns += [[c] for c in children]
    if include_pairs and len(children) > 2:
        patterns += [
            sorted([a, b])
            for i, a in enumerate(children)
            for b in children[i + 1 :]
        ]
    if len(children) >= 2:
        patterns.append(sorted(children))
    return patterns


def _session_payload(doc: Mapping[str, Any]) -> Dict[str, Any]:
    """Session state plus violations/completeness, as the UI consumes it."""
    out = dict(doc)
    complete = all(g is not None for g in doc.get("gaps", [])) and bool(doc.get("gaps"))
    violations: List[Dict[str, Any]] = []
    if complete:
        try:
            session = session_from_doc(_to_engine_session_doc(doc))
            violations = [v.to_doc() for v in check_consistency(session)]
        except ValidationError as exc:
            violations = [{"code": "invalid", "message": str(exc), "subject": []}]
    out["complete"] = complete
    out["violations"] = violations
    return out


def _to_engine_session_doc(doc: Mapping[str, Any]) -> Dict[str, Any]:
    """Strip service bookkeeping down to the batch session file schema."""
    if doc["kind"] == "utility":
        return {
            "schema_version": 1,
            "kind": "utility",
            "metric_id": doc["metric_id"],
            "elements": doc["elements"],
            "good": doc["good"],
            "gaps": doc["gaps"],
        }
    return {
        "schema_version": 1,
        "kind": "capacity",
        "node_id": doc["node_id"],
        "children": doc["children"],
        "ranking": doc["ranking"],
        "gaps": doc["gaps"],
    }


def create_app(store: Store, static_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="benchrank", version="0.1.0")

    def load_model_or_404(model_id: str) -> CriteriaTree:
        try:
            return store.load_model(model_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no model {model_id!r}")

    def gather_profiles(
        tree: CriteriaTree, bodies: List[ProfileBody], use_records: bool
    ) -> tuple[List[MeasurementProfile], List[str]]:
        profiles: List[MeasurementProfile] = []
        warnings: List[str] = []
        if use_records:
            profiles, warnings = build_profiles(tree, store.load_records())
        by_id = {p.alternative_id: p for p in profiles}
        for body in bodies:
            by_id[body.alternative_id] = body.to_profile()
        return list(by_id.values()), warnings

    @app.exception_handler(ValidationError)
    async def _validation_handler(_, exc: ValidationError):
        status = 409 if isinstance(exc, StaleSessionError) else 422
        payload: Dict[str, Any] = {"detail": str(exc)}
        if isinstance(exc, ConsistencyError):
            payload["violations"] = [v.to_doc() for v in exc.violations]
        return Response(
            content=json.dumps(payload), status_code=status, media_type="application/json"
        )

    # -- models -------------------------------------------------------------

    @app.get(API_PREFIX + "/models")
    def list_models():
        return {"models": store.list_models()}

    @app.get(API_PREFIX + "/models/{model_id}")
    def get_model(model_id: str):
        return _canonical(model_to_doc(load_model_or_404(model_id)))

    @app.put(API_PREFIX + "/models/{model_id}")
    def put_model(model_id: str, doc: Dict[str, Any]):
        tree = model_from_doc(doc)
        store.save_model(model_id, tree)
        return _canonical(model_to_doc(tree))

    @app.delete(API_PREFIX + "/models/{model_id}")
    def delete_model(model_id: str):
        try:
            store.delete_model(model_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no model {model_id!r}")
        return {"deleted": model_id}

    @app.get(API_PREFIX + "/models/{model_id}/inspect")
    def inspect_model(model_id: str):
        """Gauges and curves: importance/interaction per aggregation, utility
        breakpoints per criterion; everything the UI renders about a model."""
        tree = load_model_or_404(model_id)
        aggregations = {}
        criteria = {}
        for node in tree.nodes.values():
            if node.kind is NodeKind.AGGREGATION:
                importance, interaction = importance_and_interaction(node.choquet)
                aggregations[node.id] = {
                    "label": node.label,
                    "children": list(node.choquet.children),
                    "importance": importance,
                    "interaction": [
                        {"pair": list(k), "value": v} for k, v in sorted(interaction.items())
                    ],
                    "singletons": dict(node.choquet.singleton_weights),
                    "min_pairs": [
                        {"pair": list(k), "weight": w}
                        for k, w in sorted(node.choquet.min_weights.items())
                    ],
                    "max_pairs": [
                        {"pair": list(k), "weight": w}
                        for k, w in sorted(node.choquet.max_weights.items())
                    ],
                }
            else:
                u = node.utility
                criteria[node.id] = {
                    "label": node.label,
                    "metric_id": u.metric_id,
                    "direction": u.direction.value,
                    "breakpoints": [[v, util] for v, util in u.breakpoints],
                    "bad_value": u.bad_value,
                    "good_value": u.good_value,
                }
        return _canonical(
            {
                "model_id": model_id,
                "root": tree.root,
                "scope_label": tree.scope_label,
                "aggregations": aggregations,
                "criteria": criteria,
            }
        )

    # -- records ------------------------------------------------------------

    @app.post(API_PREFIX + "/records")
    def ingest(doc: Dict[str, Any]):
        report = store.append_records(parse_ingest_document(doc))
        return report.to_doc()

    @app.get(API_PREFIX + "/records")
    def list_records(
        alternative_id: Optional[str] = Query(default=None),
        family: Optional[str] = Query(default=None),
    ):
        records = store.load_records(alternative_id=alternative_id, family=family)
        return {"records": [r.to_doc() for r in records]}

    # -- evaluation / explanation / what-if ---------------------------------

    def _evaluate(tree: CriteriaTree, body: EvaluateBody) -> Dict[str, Any]:
        profiles, warnings = gather_profiles(tree, body.profiles, body.use_records)
        report = evaluate_and_report(tree, profiles=profiles)
        doc = report.to_doc()
        doc["warnings"] = sorted(set(doc["warnings"]) | set(warnings))
        intervals = {}
        for profile in profiles:
            if profile.intervals:
                result = evaluate_interval(tree, profile)
                intervals[profile.alternative_id] = {
                    node: [lo, hi] for node, (lo, hi) in sorted(result.intervals.items())
                }
        if intervals:
            doc["intervals"] = intervals
        return doc

    @app.post(API_PREFIX + "/evaluate")
    def evaluate(body: EvaluateBody):
        tree = load_model_or_404(body.model_id)
        return _canonical(_evaluate(tree, body))

    @app.post(API_PREFIX + "/explain")
    def explain(body: ExplainBody):
        tree = load_model_or_404(body.model_id)
        profiles, _ = gather_profiles(tree, body.profiles, body.use_records)
        by_id = {p.alternative_id: p for p in profiles}
        if body.alternative_id not in by_id:
            raise HTTPException(
                status_code=404,
                detail=f"no evaluable profile for {body.alternative_id!r}",
            )
        report = hierarchical_explanation(
            tree, by_id[body.alternative_id], body.reference, profiles
        )
        doc = report.to_doc()
        ref = reference_profile(body.reference, tree, profiles)
        doc["reference_values"] = dict(sorted(ref.values.items()))
        return _canonical(doc)

    @app.post(API_PREFIX + "/whatif")
    def what_if(body: WhatIfBody):
        tree = load_model_or_404(body.model_id)
        nodes = dict(tree.nodes)
        for override in body.overrides:
            if override.node_id not in nodes:
                raise HTTPException(
                    status_code=422, detail=f"unknown node {override.node_id!r}"
                )
            node = nodes[override.node_id]
            if override.choquet is not None:
                payload: Any = _choquet_from_doc(override.choquet)
                kind = NodeKind.AGGREGATION
            elif override.utility is not None:
                payload = _utility_from_doc(override.utility)
                kind = NodeKind.CRITERION
            else:
                continue
            if node.kind is not kind:
                raise HTTPException(
                    status_code=422,
                    detail=f"override kind does not match node {override.node_id!r}",
                )
            nodes[override.node_id] = Node(node.id, node.kind, node.label, payload)
        modified = CriteriaTree(
            nodes=nodes,
            root=tree.root,
            scope_label=tree.scope_label,
            metric_aggregation=tree.metric_aggregation,
        )
        return _canonical(
            _evaluate(modified, EvaluateBody(
                model_id=body.model_id,
                profiles=body.profiles,
                use_records=body.use_records,
            ))
        )

    # -- elicitation sessions ------------------------------------------------

    @app.post(API_PREFIX + "/sessions")
    def create_session(body: SessionCreateBody):
        if body.kind == "utility":
            if body.metric_id is None or body.good is None or len(body.elements) < 2:
                raise HTTPException(
                    status_code=422,
                    detail="utility session needs metric_id, elements and good",
                )
            doc = {
                "kind": "utility",
                "metric_id": body.metric_id,
                "elements": body.elements,
                "good": body.good,
                "gaps": [None] * (len(body.elements) - 1),
            }
        elif body.kind == "capacity":
            if body.node_id is None or len(body.children) < 2:
                raise HTTPException(
                    status_code=422,
                    detail="capacity session needs node_id and >= 2 children",
                )
            patterns = _capacity_patterns(body.children, body.include_pairs)
            doc = {
                "kind": "capacity",
                "node_id": body.node_id,
                "children": list(body.children),
                "ranking": patterns,
                "gaps": [None] * (len(patterns) - 1),
            }
        else:
            raise HTTPException(status_code=422, detail=f"unknown kind {body.kind!r}")
        return _session_payload(store.create_session(doc))

    @app.get(API_PREFIX + "/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            return _session_payload(store.load_session(session_id))
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")

    @app.post(API_PREFIX + "/sessions/{session_id}/answers")
    def submit_answers(session_id: str, body: SessionAnswerBody):
        try:
            current = store.load_session(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
        if current.get("finalized"):
            raise HTTPException(status_code=422, detail="session already finalized")
        updated = dict(current)
        if body.ranking is not None:
            if current["kind"] != "capacity":
                raise HTTPException(
                    status_code=422, detail="only capacity sessions take a ranking"
                )
            updated["ranking"] = [sorted(p) for p in body.ranking]
        if body.gaps is not None:
            expected = len(updated.get("ranking", updated.get("elements", []))) - 1
            if len(body.gaps) != expected:
                raise HTTPException(
                    status_code=422, detail=f"expected {expected} gap labels"
                )
            for gap in body.gaps:
                if gap is not None:
                    parse_gap(gap)  # validates the label text
            updated["gaps"] = list(body.gaps)
        stored = store.update_session(session_id, updated, body.version)
        return _session_payload(stored)

    @app.post(API_PREFIX + "/sessions/{session_id}/finalize")
    def finalize_session(session_id: str, body: SessionFinalizeBody):
        try:
            current = store.load_session(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
        payload = _session_payload(current)
        if not payload["complete"]:
            raise HTTPException(status_code=422, detail="session has unanswered gaps")
        if payload["violations"]:
            raise HTTPException(
                status_code=422,
                detail="session is inconsistent; resolve violations first",
            )
        session = session_from_doc(_to_engine_session_doc(current))
        tree = load_model_or_404(body.model_id)
        if isinstance(session, UtilitySession):
            derived: Any = derive_utility_function(session)
            node_id = body.node_id
            if node_id is None:
                matches = [
                    n.id
                    for n in tree.leaves()
                    if n.utility.metric_id == session.metric_id
                ]
                if len(matches) != 1:
                    raise HTTPException(
                        status_code=422,
                        detail=f"cannot infer target node for {session.metric_id!r}",
                    )
                node_id = matches[0]
            expected_kind = NodeKind.CRITERION
        else:
            derived = derive_capacity(session)
            node_id = body.node_id or session.node_id
            expected_kind = NodeKind.AGGREGATION
        if node_id not in tree.nodes:
            raise HTTPException(status_code=422, detail=f"unknown node {node_id!r}")
        node = tree.nodes[node_id]
        if node.kind is not expected_kind:
            raise HTTPException(
                status_code=422, detail=f"node {node_id!r} has the wrong kind"
            )
        nodes = dict(tree.nodes)
        nodes[node_id] = Node(node.id, node.kind, node.label, derived)
        updated_tree = CriteriaTree(
            nodes=nodes,
            root=tree.root,
            scope_label=tree.scope_label,
            metric_aggregation=tree.metric_aggregation,
        )
        store.save_model(body.model_id, updated_tree)
        stored = store.update_session(
            session_id, {**current, "finalized": True}, body.version
        )
        return {
            "session": _session_payload(stored),
            "model": model_to_doc(updated_tree),
        }

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve_api(
    store_root: Path | str,
    host: str = "127.0.0.1",
    port: int = 8711,
    static_dir: Optional[Path] = None,
) -> None:
    """Run the API under uvicorn until interrupted."""
    import uvicorn

    app = create_app(Store(store_root), static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
