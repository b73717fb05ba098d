"""Hierarchical multi-criteria scoring: utilities + 2-additive Choquet trees."""

from .evaluate import (
    apply_utility,
    choquet_2add,
    evaluate_interval,
    evaluate_tree,
    importance_and_interaction,
)
from .io import load_model, model_from_doc, model_to_doc, save_model
from .model import (
    WEIGHT_SUM_TOL,
    ChoquetParams,
    CriteriaTree,
    Direction,
    EvaluationResult,
    IntervalResult,
    MeasurementProfile,
    Node,
    NodeKind,
    UtilityFunction,
    aggregation,
    criterion,
    two_level_tree,
)

__all__ = [
    "WEIGHT_SUM_TOL",
    "ChoquetParams",
    "CriteriaTree",
    "Direction",
    "EvaluationResult",
    "IntervalResult",
    "MeasurementProfile",
    "Node",
    "NodeKind",
    "UtilityFunction",
    "aggregation",
    "apply_utility",
    "choquet_2add",
    "criterion",
    "evaluate_interval",
    "evaluate_tree",
    "importance_and_interaction",
    "load_model",
    "model_from_doc",
    "model_to_doc",
    "save_model",
    "two_level_tree",
]
