"""Deterministic instance generators for the optimization benchmark families.

Every generator is a pure function of (family, parameters, seed): regenerating
with the same inputs yields byte-identical instances, which is what makes
benchmark records comparable across runs and machines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from ..errors import ValidationError
from .linear import LinearSystem, random_linear_system
from .problems import (
    Graph,
    PseudoBooleanProblem,
    Sense,
    Term,
    load_graph,
    maxcut_problem,
    poly_add,
    poly_mul,
    poly_scale,
)

FAMILIES = ("maxcut", "matching", "hobo", "factorization", "linear_system")


@dataclass(frozen=True)
class GeneratedInstance:
    family: str
    seed: int
    params: Mapping[str, object]
    problem: Optional[PseudoBooleanProblem] = None
    graph: Optional[Graph] = None
    linear: Optional[LinearSystem] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", dict(self.params))

    @property
    def descriptor(self) -> str:
        inner = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return f"{self.family}({inner})"


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.uint64(seed))


def maxcut_graph(n: int, seed: int) -> Graph:
    """Random graph on n vertices with exactly round(n^2/4) edges.

    The fixed edge count pins the expected random-assignment cut to exactly
    n^2/8, the random baseline the quality score beta divides out; with
    Bernoulli(1/2) edges the baseline would be biased by -n/8 at desk sizes.
    """
    if n < 2:
        raise ValidationError("maxcut needs at least 2 vertices")
    all_pairs = list(combinations(range(n), 2))
    m = round(n * n / 4)
    if m > len(all_pairs):
        raise ValidationError(f"cannot place {m} edges on {n} vertices")
    idx = _rng(seed).choice(len(all_pairs), size=m, replace=False)
    edges = tuple(all_pairs[i] for i in sorted(idx))
    return Graph(num_vertices=n, edges=edges)


def _gen_maxcut(params: Mapping[str, object], seed: int) -> GeneratedInstance:
    n = int(params["n"])
    graph = maxcut_graph(n, seed)
    problem = maxcut_problem(graph, {"n": n, "seed": seed})
    return GeneratedInstance("maxcut", seed, {"n": n}, problem=problem, graph=graph)


def bipartite_graph(n_left: int, n_right: int, edge_prob: float, seed: int) -> Graph:
    if n_left < 1 or n_right < 1:
        raise ValidationError("both sides of the bipartition must be nonempty")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValidationError("edge probability must be in [0, 1]")
    rng = _rng(seed)
    edges = []
    for u in range(n_left):
        for v in range(n_right):
            if rng.random() < edge_prob:
                edges.append((u, n_left + v))
    sides = tuple([0] * n_left + [1] * n_right)
    return Graph(num_vertices=n_left + n_right, edges=tuple(edges), bipartition=sides)


def matching_problem(graph: Graph, metadata: Mapping[str, object] | None = None) -> PseudoBooleanProblem:
    """Maximum-cardinality matching as a QUBO over edge variables.

    Rewards one per selected edge; every pair of edges sharing a vertex pays
    penalty P = max degree + 1, the smallest integer making any conflicting
    selection strictly worse than dropping one of the offenders.
    """
    if graph.bipartition is None:
        raise ValidationError("matching instances require a bipartite graph")
    if not graph.edges:
        raise ValidationError("matching needs at least one edge")
    penalty = max(graph.degrees()) + 1
    terms: Dict[Term, float] = {}
    for e, _ in enumerate(graph.edges):
        terms[(e,)] = 1.0
    incident: Dict[int, list[int]] = {}
    for e, (u, v) in enumerate(graph.edges):
        incident.setdefault(u, []).append(e)
        incident.setdefault(v, []).append(e)
    for edge_ids in incident.values():
        for e1, e2 in combinations(sorted(edge_ids), 2):
            terms[(e1, e2)] = terms.get((e1, e2), 0.0) - float(penalty)
    return PseudoBooleanProblem(
        num_vars=len(graph.edges),
        terms=terms,
        sense=Sense.MAXIMIZE,
        metadata={"family": "matching", "penalty": penalty, **(metadata or {})},
    )


def _gen_matching(params: Mapping[str, object], seed: int) -> GeneratedInstance:
    if "graph_file" in params:
        # externally constructed instances (published hard families) load
        # verbatim; the random bipartite family below is a documented stand-in
        graph = load_graph(str(params["graph_file"]))
        used: Dict[str, object] = {"graph_file": str(params["graph_file"])}
    else:
        n_left = int(params.get("n_left", params.get("n", 4)))
        n_right = int(params.get("n_right", n_left))
        edge_prob = float(params.get("edge_prob", 0.5))
        graph = bipartite_graph(n_left, n_right, edge_prob, seed)
        used = {"n_left": n_left, "n_right": n_right, "edge_prob": edge_prob}
    if not graph.edges:
        return GeneratedInstance("matching", seed, used, problem=None, graph=graph)
    problem = matching_problem(graph, {"seed": seed, **used})
    return GeneratedInstance("matching", seed, used, problem=problem, graph=graph)


def _gen_hobo(params: Mapping[str, object], seed: int) -> GeneratedInstance:
    n = int(params["n"])
    degree = int(params.get("degree", 3))
    num_terms = int(params.get("num_terms", max(4, 2 * n)))
    if degree < 1 or degree > n:
        raise ValidationError(f"degree {degree} not in [1, {n}]")
    rng = _rng(seed)
    terms: Dict[Term, float] = {}
    # one term pinned at the requested degree so the instance really is a HOBO
    pinned = tuple(sorted(rng.choice(n, size=degree, replace=False)))
    terms[pinned] = float(rng.uniform(-1.0, 1.0)) or 0.5
    while len(terms) < num_terms:
        size = int(rng.integers(1, degree + 1))
        key = tuple(sorted(rng.choice(n, size=size, replace=False)))
        if key in terms:
            continue
        coeff = float(rng.uniform(-1.0, 1.0))
        if coeff != 0.0:
            terms[key] = coeff
    problem = PseudoBooleanProblem(
        num_vars=n,
        terms=terms,
        sense=Sense.MINIMIZE,
        metadata={"family": "hobo", "seed": seed, "requested_degree": degree},
    )
    return GeneratedInstance(
        "hobo", seed, {"n": n, "degree": degree, "num_terms": num_terms}, problem=problem
    )


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _bits_covering(limit: int) -> int:
    """Smallest k such that 1 + 2*(2^k - 1) = 2^(k+1) - 1 >= limit."""
    k = 1
    while 2 ** (k + 1) - 1 < limit:
        k += 1
    return k


def factorization_problem(n: int) -> PseudoBooleanProblem:
    """Cost (N - p1*p2)^2 over the bits of two odd candidate factors.

    p1 = 1 + 2*sum(a_i 2^i) ranges just past ceil(sqrt(N)) and p2 past N/3;
    forcing both factors odd and bounded below N excludes the trivial 1*N
    product, so cost 0 is reachable exactly when N has a nontrivial odd
    factorization.
    """
    if n < 9:
        raise ValidationError("factorization targets must be at least 9")
    if n % 2 == 0:
        raise ValidationError("even targets are trivially factorable; rejected")
    k1 = _bits_covering(math.isqrt(n - 1) + 1)
    k2 = _bits_covering(n // 3)
    p1 = {(): 1.0}
    for i in range(k1):
        p1[(i,)] = float(2 ** (i + 1))
    p2 = {(): 1.0}
    for j in range(k2):
        p2[(k1 + j,)] = float(2 ** (j + 1))
    product = poly_mul(p1, p2)
    cost = poly_add(
        {(): float(n) ** 2},
        poly_scale(product, -2.0 * n),
        poly_mul(product, product),
    )
    return PseudoBooleanProblem(
        num_vars=k1 + k2,
        terms=cost,
        sense=Sense.MINIMIZE,
        metadata={
            "family": "factorization",
            "target": n,
            "bits_p1": k1,
            "bits_p2": k2,
            "prime": _is_prime(n),
        },
    )


def decode_factors(problem: PseudoBooleanProblem, bits) -> Tuple[int, int, float]:
    """Candidate factors and their cost (N - p1*p2)^2 from a bit assignment."""
    meta = problem.metadata
    if meta.get("family") != "factorization":
        raise ValidationError("decode_factors needs a factorization instance")
    k1, k2, target = int(meta["bits_p1"]), int(meta["bits_p2"]), int(meta["target"])
    bits = list(int(b) for b in bits)
    if len(bits) != k1 + k2:
        raise ValidationError("assignment length does not match the bit encoding")
    p1 = 1 + sum(bits[i] * 2 ** (i + 1) for i in range(k1))
    p2 = 1 + sum(bits[k1 + j] * 2 ** (j + 1) for j in range(k2))
    return p1, p2, float(target - p1 * p2) ** 2


def encode_factors(problem: PseudoBooleanProblem, p1: int, p2: int) -> Tuple[int, ...]:
    """Bit assignment encoding a given odd factor pair; inverse of decode_factors."""
    meta = problem.metadata
    if meta.get("family") != "factorization":
        raise ValidationError("encode_factors needs a factorization instance")
    k1, k2 = int(meta["bits_p1"]), int(meta["bits_p2"])
    if p1 % 2 == 0 or p2 % 2 == 0 or p1 < 1 or p2 < 1:
        raise ValidationError("factors must be odd positive integers")
    a, b = (p1 - 1) // 2, (p2 - 1) // 2
    if a >= 2**k1 or b >= 2**k2:
        raise ValidationError(f"factors ({p1}, {p2}) do not fit the bit widths")
    bits = [(a >> i) & 1 for i in range(k1)] + [(b >> j) & 1 for j in range(k2)]
    return tuple(bits)


def _gen_factorization(params: Mapping[str, object], seed: int) -> GeneratedInstance:
    n = int(params["N"])
    problem = factorization_problem(n)
    return GeneratedInstance("factorization", seed, {"N": n}, problem=problem)


def _gen_linear_system(params: Mapping[str, object], seed: int) -> GeneratedInstance:
    n = int(params.get("n", 16))
    cond = float(params.get("cond", 10.0))
    system = random_linear_system(n, cond, _rng(seed))
    return GeneratedInstance(
        "linear_system", seed, {"n": n, "cond": cond}, linear=system
    )


_GENERATORS = {
    "maxcut": _gen_maxcut,
    "matching": _gen_matching,
    "hobo": _gen_hobo,
    "factorization": _gen_factorization,
    "linear_system": _gen_linear_system,
}


def gen_instance(family: str, params: Mapping[str, object], seed: int) -> GeneratedInstance:
    """One deterministic benchmark instance of the requested family."""
    try:
        generator = _GENERATORS[family]
    except KeyError:
        raise ValidationError(
            f"unknown family {family!r}; expected one of {FAMILIES}"
        ) from None
    return generator(params, int(seed))
