"""Exact maximum-cardinality matching on bipartite graphs (Hopcroft-Karp).

Serves as the polynomial-time oracle against which the QUBO encoding of the
matching family is checked: optimal QUBO solutions must decode to matchings
of exactly this size.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, List, Sequence, Set, Tuple

from ..errors import ValidationError
from .problems import Graph

_INF = float("inf")


def matching_oracle(graph: Graph) -> int:
    """Size of a maximum matching; requires the bipartition to be present."""
    if graph.bipartition is None:
        raise ValidationError("matching oracle requires a bipartite graph")
    left = [v for v in range(graph.num_vertices) if graph.bipartition[v] == 0]
    adj: Dict[int, List[int]] = {u: [] for u in left}
    for u, v in graph.edges:
        if graph.bipartition[u] == 1:
            u, v = v, u
        adj[u].append(v)

    match_left: Dict[int, int] = {}
    match_right: Dict[int, int] = {}
    dist: Dict[int, float] = {}

    def bfs() -> bool:
        queue: deque[int] = deque()
        for u in left:
            if u not in match_left:
                dist[u] = 0.0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                nxt = match_right.get(v)
                if nxt is None:
                    found = True
                elif dist[nxt] == _INF:
                    dist[nxt] = dist[u] + 1
                    queue.append(nxt)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            nxt = match_right.get(v)
            if nxt is None or (dist[nxt] == dist[u] + 1 and dfs(nxt)):
                match_left[u] = v
                match_right[v] = u
                return True
        dist[u] = _INF
        return False

    size = 0
    while bfs():
        for u in left:
            if u not in match_left and dfs(u):
                size += 1
    return size


def is_matching(graph: Graph, edge_ids: Sequence[int]) -> bool:
    """True when the selected edge ids share no vertex."""
    used: Set[int] = set()
    for e in edge_ids:
        u, v = graph.edges[e]
        if u in used or v in used:
            return False
        used.update((u, v))
    return True


def decode_matching(graph: Graph, bits: Sequence[int]) -> Tuple[int, ...]:
    """Edge ids selected by a matching-QUBO assignment."""
    if len(bits) != len(graph.edges):
        raise ValidationError("assignment length does not match edge count")
    return tuple(e for e, b in enumerate(bits) if b)
