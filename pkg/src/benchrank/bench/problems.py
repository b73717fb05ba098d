"""Pseudo-Boolean problems and graphs: the common currency of the optimization families.

A problem is a multilinear polynomial over binary variables, stored sparsely
as a map from sorted index tuples to real coefficients (the empty tuple is
the constant term).  Degree <= 2 makes it a QUBO; higher degrees appear in
the HOBO and factorization families and can be reduced via quadratization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from ..errors import ValidationError

Term = Tuple[int, ...]


class Sense(str, Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


def _normalize_terms(terms: Mapping[Sequence[int], float]) -> Dict[Term, float]:
    """Sort and deduplicate indices (x*x = x on binaries), merge, drop zeros."""
    out: Dict[Term, float] = {}
    for raw, coeff in terms.items():
        key = tuple(sorted(set(int(i) for i in raw)))
        out[key] = out.get(key, 0.0) + float(coeff)
    return {k: v for k, v in out.items() if v != 0.0}


@dataclass(frozen=True)
class PseudoBooleanProblem:
    num_vars: int
    terms: Mapping[Term, float]
    sense: Sense = Sense.MINIMIZE
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "sense", Sense(self.sense))
        terms = _normalize_terms(self.terms)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "metadata", dict(self.metadata))
        if self.num_vars < 1:
            raise ValidationError("a problem needs at least one variable")
        degree = 0
        for key, coeff in terms.items():
            if key and not (0 <= key[0] and key[-1] < self.num_vars):
                raise ValidationError(f"term {key} out of range for {self.num_vars} vars")
            if not math.isfinite(coeff):
                raise ValidationError(f"non-finite coefficient on term {key}")
            degree = max(degree, len(key))
        if degree < 1:
            raise ValidationError("a problem needs at least one non-constant term")

    @property
    def degree(self) -> int:
        return max(len(k) for k in self.terms)

    def is_qubo(self) -> bool:
        return self.degree <= 2

    def constant(self) -> float:
        return self.terms.get((), 0.0)

    def sorted_terms(self) -> Tuple[Tuple[Term, float], ...]:
        return tuple(sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])))

    def to_doc(self) -> Dict[str, object]:
        return {
            "num_vars": self.num_vars,
            "sense": self.sense.value,
            "terms": [[list(k), v] for k, v in self.sorted_terms()],
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, object]) -> "PseudoBooleanProblem":
        return cls(
            num_vars=int(doc["num_vars"]),
            terms={tuple(k): v for k, v in doc["terms"]},
            sense=Sense(doc.get("sense", "minimize")),
            metadata=doc.get("metadata", {}),
        )


def evaluate_solution(problem: PseudoBooleanProblem, bits: Sequence[int]) -> float:
    """Polynomial value at a bit assignment (the cut size for MaxCut encodings)."""
    bits = np.asarray(bits)
    if bits.shape != (problem.num_vars,):
        raise ValidationError(
            f"assignment length {bits.shape} does not match {problem.num_vars} vars"
        )
    if not np.all((bits == 0) | (bits == 1)):
        raise ValidationError("assignment must be 0/1 valued")
    total = 0.0
    for key, coeff in problem.terms.items():
        if all(bits[i] for i in key):
            total += coeff
    return total


# --- polynomial arithmetic on term dicts (multilinear reduction built in) ---

def poly_add(*polys: Mapping[Term, float]) -> Dict[Term, float]:
    out: Dict[Term, float] = {}
    for poly in polys:
        for key, coeff in poly.items():
            out[key] = out.get(key, 0.0) + coeff
    return {k: v for k, v in out.items() if v != 0.0}


def poly_scale(poly: Mapping[Term, float], factor: float) -> Dict[Term, float]:
    return {k: v * factor for k, v in poly.items() if v * factor != 0.0}


def poly_mul(a: Mapping[Term, float], b: Mapping[Term, float]) -> Dict[Term, float]:
    out: Dict[Term, float] = {}
    for ka, va in a.items():
        sa = set(ka)
        for kb, vb in b.items():
            key = tuple(sorted(sa | set(kb)))
            out[key] = out.get(key, 0.0) + va * vb
    return {k: v for k, v in out.items() if v != 0.0}


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; optional bipartition for matching instances."""

    num_vertices: int
    edges: Tuple[Tuple[int, int], ...]
    #: side (0 or 1) per vertex; present only for bipartite instances
    bipartition: Tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        edges = tuple(tuple(sorted((int(u), int(v)))) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.bipartition is not None:
            object.__setattr__(self, "bipartition", tuple(int(s) for s in self.bipartition))
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValidationError(f"edge ({u}, {v}) out of range")
            if (u, v) in seen:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if self.bipartition is not None:
            if len(self.bipartition) != self.num_vertices:
                raise ValidationError("bipartition must cover all vertices")
            if not set(self.bipartition) <= {0, 1}:
                raise ValidationError("bipartition sides must be 0 or 1")
            for u, v in edges:
                if self.bipartition[u] == self.bipartition[v]:
                    raise ValidationError(f"edge ({u}, {v}) does not cross the bipartition")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> Tuple[int, ...]:
        deg = [0] * self.num_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)


def graph_to_doc(graph: Graph) -> Dict[str, object]:
    doc: Dict[str, object] = {
        "num_vertices": graph.num_vertices,
        "edges": [list(e) for e in graph.edges],
    }
    if graph.bipartition is not None:
        doc["bipartition"] = list(graph.bipartition)
    return doc


def graph_from_doc(doc: Mapping[str, object]) -> Graph:
    try:
        return Graph(
            num_vertices=int(doc["num_vertices"]),
            edges=tuple(tuple(e) for e in doc["edges"]),
            bipartition=(
                tuple(doc["bipartition"]) if doc.get("bipartition") is not None else None
            ),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed graph document: {exc}") from exc


def load_graph(path) -> Graph:
    """Graph from a JSON file: externally constructed instances (e.g. published
    hard matching families) enter the harness through this loader."""
    import json
    from pathlib import Path

    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"graph file {path}: invalid JSON ({exc})") from exc
    return graph_from_doc(doc)


def cut_size(graph: Graph, bits: Sequence[int]) -> float:
    """Number of edges crossing the 0/1 vertex split; independent of encoding."""
    bits = np.asarray(bits)
    if bits.shape != (graph.num_vertices,):
        raise ValidationError("assignment length does not match vertex count")
    return float(sum(1 for u, v in graph.edges if bits[u] != bits[v]))


def maxcut_problem(graph: Graph, metadata: Mapping[str, object] | None = None) -> PseudoBooleanProblem:
    """Cut maximization as a QUBO: each edge contributes x_u + x_v - 2 x_u x_v."""
    terms: Dict[Term, float] = {}
    for u, v in graph.edges:
        terms[(u,)] = terms.get((u,), 0.0) + 1.0
        terms[(v,)] = terms.get((v,), 0.0) + 1.0
        terms[(u, v)] = terms.get((u, v), 0.0) - 2.0
    return PseudoBooleanProblem(
        num_vars=graph.num_vertices,
        terms=terms,
        sense=Sense.MAXIMIZE,
        metadata={"family": "maxcut", **(metadata or {})},
    )
