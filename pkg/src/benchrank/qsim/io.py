"""Shared document format for ideal-value export and measured-value import.

The same JSON shape travels in both directions: the harness exports exact
expectation values for a (model, t) pair, a device run fills in its own
measured values against the same labels, and the import side validates the
result before scoring.
"""

from __future__ import annotations

from typing import Dict, Mapping, Tuple

from ..errors import ValidationError
from .pauli import SpinSystem

SIMULATION_SCHEMA_VERSION = 1


def simulation_document(
    system: SpinSystem, t: float, values: Mapping[str, float]
) -> Dict[str, object]:
    return {
        "schema_version": SIMULATION_SCHEMA_VERSION,
        "model": {
            "name": system.model,
            "num_qubits": system.num_qubits,
            "boundary": system.boundary,
            "params": dict(system.params),
            "terms": [[c, p] for c, p in system.terms],
        },
        "t": float(t),
        "values": [[label, float(v)] for label, v in sorted(values.items())],
    }


def export_ideal_values(
    system: SpinSystem, t: float, values: Mapping[str, float]
) -> Dict[str, object]:
    return simulation_document(system, t, values)


def simulation_benchmark_metrics(
    measured: Mapping[str, float],
    ideal: Mapping[str, float],
    fidelity_value: float | None = None,
) -> Dict[str, float]:
    """Metric dict for this family's benchmark records.

    G is reported raw together with the observable count (no cross-size
    normalization is defined; the scoring model's utility function owns
    that); overlap fidelity joins when the full state was available.
    """
    from .observables import infidelity_proxy

    metrics = {
        "infidelity_proxy": infidelity_proxy(measured, ideal),
        "observable_count": float(len(ideal)),
    }
    if fidelity_value is not None:
        metrics["fidelity"] = float(fidelity_value)
    return metrics


def import_measured_values(doc: Mapping[str, object]) -> Tuple[float, Dict[str, float]]:
    """(t, label -> value) from a device-result document."""
    if doc.get("schema_version") != SIMULATION_SCHEMA_VERSION:
        raise ValidationError(
            f"unsupported simulation schema_version {doc.get('schema_version')!r}"
        )
    try:
        t = float(doc["t"])
        raw = doc["values"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed simulation document: {exc}") from exc
    values: Dict[str, float] = {}
    for entry in raw:
        label, value = entry
        if label in values:
            raise ValidationError(f"duplicate observable label {label!r}")
        values[str(label)] = float(value)
    return t, values
