"""Benchmark records: the unit of evidence the results store accumulates.

One record captures one solver-or-device run on one instance: who ran, which
family, which instance and seed, the metric values it produced, and where the
numbers came from.  Externally published results (e.g. vendor scores) enter
the same way but must carry a source citation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from ..errors import ValidationError

RECORD_SCHEMA_VERSION = 1

PROVENANCES = ("local", "external")


@dataclass(frozen=True)
class BenchmarkRecord:
    alternative_id: str
    family: str
    instance: str
    seed: int
    metrics: Mapping[str, float]
    timestamp: str
    provenance: str
    source: Optional[str] = None
    wall_clock_s: Optional[float] = None
    energy_j: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "metrics", {str(k): float(v) for k, v in dict(self.metrics).items()}
        )
        if not self.alternative_id:
            raise ValidationError("record needs an alternative_id")
        if self.provenance not in PROVENANCES:
            raise ValidationError(
                f"provenance must be one of {PROVENANCES}, got {self.provenance!r}"
            )
        if self.provenance == "external" and not self.source:
            raise ValidationError("ingested external records must cite a source")
        if not self.metrics:
            raise ValidationError("record carries no metric values")
        for metric, value in self.metrics.items():
            if not math.isfinite(value):
                raise ValidationError(f"metric {metric!r} has non-finite value {value}")
        if self.wall_clock_s is not None and self.wall_clock_s < 0:
            raise ValidationError(f"negative wall clock {self.wall_clock_s}")
        if self.energy_j is not None and self.energy_j <= 0:
            raise ValidationError("energy, when reported, must be positive joules")

    @property
    def key(self) -> Tuple[str, str, str, int]:
        return (self.alternative_id, self.family, self.instance, self.seed)

    def to_doc(self) -> Dict[str, object]:
        doc: Dict[str, object] = {
            "schema_version": RECORD_SCHEMA_VERSION,
            "alternative_id": self.alternative_id,
            "family": self.family,
            "instance": self.instance,
            "seed": self.seed,
            "metrics": dict(self.metrics),
            "timestamp": self.timestamp,
            "provenance": self.provenance,
        }
        if self.source is not None:
            doc["source"] = self.source
        if self.wall_clock_s is not None:
            doc["wall_clock_s"] = self.wall_clock_s
        if self.energy_j is not None:
            doc["energy_j"] = self.energy_j
        return doc

    @classmethod
    def from_doc(cls, doc: Mapping[str, object]) -> "BenchmarkRecord":
        version = doc.get("schema_version")
        if version != RECORD_SCHEMA_VERSION:
            raise ValidationError(
                f"unsupported record schema_version {version!r}"
            )
        try:
            return cls(
                alternative_id=str(doc["alternative_id"]),
                family=str(doc["family"]),
                instance=str(doc["instance"]),
                seed=int(doc["seed"]),
                metrics=doc["metrics"],
                timestamp=str(doc["timestamp"]),
                provenance=str(doc["provenance"]),
                source=doc.get("source"),
                wall_clock_s=doc.get("wall_clock_s"),
                energy_j=doc.get("energy_j"),
            )
        except KeyError as exc:
            raise ValidationError(f"record is missing field {exc.args[0]!r}") from exc


@dataclass(frozen=True)
class EfficiencyMetric:
    """A performance metric divided by the energy spent producing it."""

    metric_id: str
    value: float
    energy_j: float

    def __post_init__(self) -> None:
        if self.energy_j <= 0:
            raise ValidationError("efficiency needs a positive energy cost")

    @property
    def efficiency(self) -> float:
        return self.value / self.energy_j


def compute_efficiency(metric_value: float, energy_j: float) -> float:
    """Performance per joule; the units are (metric unit) / J."""
    if energy_j <= 0:
        raise ValidationError(f"energy must be positive, got {energy_j}")
    return metric_value / energy_j


@dataclass(frozen=True)
class IngestReport:
    accepted: Tuple[BenchmarkRecord, ...]
    rejected: Tuple[Tuple[int, str], ...]  # (index in document, reason)

    def to_doc(self) -> Dict[str, object]:
        return {
            "accepted": len(self.accepted),
            "rejected": [{"index": i, "reason": r} for i, r in self.rejected],
        }


def parse_ingest_document(doc: Mapping[str, object]) -> IngestReport:
    """Validate a records document; bad entries are reported, not fatal."""
    if not isinstance(doc, Mapping) or "records" not in doc:
        raise ValidationError('ingest document must be an object with a "records" list')
    raw = doc["records"]
    if not isinstance(raw, list):
        raise ValidationError('"records" must be a list')
    accepted: List[BenchmarkRecord] = []
    rejected: List[Tuple[int, str]] = []
    seen = set()
    for i, entry in enumerate(raw):
        try:
            record = BenchmarkRecord.from_doc(entry)
        except (ValidationError, TypeError, ValueError) as exc:
            rejected.append((i, str(exc)))
            continue
        if record.key in seen:
            rejected.append((i, f"duplicate of record key {record.key} in document"))
            continue
        seen.add(record.key)
        accepted.append(record)
    return IngestReport(tuple(accepted), tuple(rejected))
