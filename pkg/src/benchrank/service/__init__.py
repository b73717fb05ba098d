"""Results persistence, ranking reports and the HTTP API."""

from .api import create_app, serve_api
from .records import (
    BenchmarkRecord,
    EfficiencyMetric,
    IngestReport,
    compute_efficiency,
    parse_ingest_document,
)
from .report import RankedReport, build_profiles, evaluate_and_report
from .store import STORE_ENV_VAR, StaleSessionError, Store, default_store_root

__all__ = [
    "BenchmarkRecord",
    "EfficiencyMetric",
    "IngestReport",
    "RankedReport",
    "STORE_ENV_VAR",
    "StaleSessionError",
    "Store",
    "build_profiles",
    "compute_efficiency",
    "create_app",
    "default_store_root",
    "evaluate_and_report",
    "parse_ingest_document",
    "serve_api",
]
