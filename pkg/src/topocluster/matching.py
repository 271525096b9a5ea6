"""Minimum-weight perfect matching on small weighted graphs.

The production path reduces to networkx's maximum-weight matching (Edmonds'
blossom algorithm) with ``maxcardinality`` and flipped weights. The exhaustive
subset DP is an independent oracle for graphs of up to ~22 vertices.
"""

from __future__ import annotations

from typing import Mapping

import networkx as nx
import numpy as np


class MatchingError(ValueError):
    pass


def min_weight_perfect_matching(
    n: int, edges: Mapping[tuple[int, int], int]
) -> list[tuple[int, int]]:
    """Pairs (i < j) of a minimum-weight perfect matching of vertices ``0..n-1``.

    Vertices and edges are inserted in sorted order, so the result is a
    deterministic function of the input.
    """
    if n % 2:
        raise MatchingError(f"perfect matching needs an even vertex count, got {n}")
    if n == 0:
        return []
    full = nx.Graph()
    full.add_nodes_from(range(n))
    full.add_edges_from(sorted(edges))
    pairs: list[tuple[int, int]] = []
    # components are independent, and blossom cost grows quickly with size
    for comp in sorted(nx.connected_components(full), key=min):
        nodes = sorted(comp)
        if len(nodes) % 2:
            raise MatchingError("graph has no perfect matching")
        if len(nodes) == 2:
            pairs.append((nodes[0], nodes[1]))
            continue
        sub = [(a, b) for a, b in sorted(full.subgraph(nodes).edges()) for a, b in [(min(a, b), max(a, b))]]
        top = max(edges[e] for e in sub) + 1
        g = nx.Graph()
        g.add_nodes_from(nodes)
        for a, b in sorted(sub):
            g.add_edge(a, b, weight=top - edges[(a, b)])
        mate = nx.max_weight_matching(g, maxcardinality=True)
        if 2 * len(mate) != len(nodes):
            raise MatchingError("graph has no perfect matching")
        pairs.extend((min(a, b), max(a, b)) for a, b in mate)
    return sorted(pairs)


def brute_force_min_weight(n: int, edges: Mapping[tuple[int, int], int]) -> float:
    """Exact optimum by DP over matched-vertex subsets; ``inf`` if no perfect matching.

    ``best[mask]`` is the cheapest way to match exactly the vertices in ``mask``
    where ``mask`` always covers a prefix-closed set: the next vertex to match
    is the lowest one not yet in ``mask``.
    """
    if n % 2:
        raise MatchingError(f"perfect matching needs an even vertex count, got {n}")
    if n == 0:
        return 0.0
    w = np.full((n, n), np.inf)
    for (a, b), v in edges.items():
        w[a, b] = w[b, a] = v
    size = 1 << n
    best = np.full(size, np.inf)
    best[0] = 0.0
    masks = np.arange(size, dtype=np.int64)
    for i in range(n):
        low = (1 << i) - 1
        # masks containing 0..i-1 but not i
        src_all = masks[((masks & low) == low) & ((masks >> i) & 1 == 0)]
        src_all = src_all[np.isfinite(best[src_all])]
        for j in range(i + 1, n):
            if not np.isfinite(w[i, j]):
                continue
            src = src_all[(src_all >> j) & 1 == 0]
            dst = src | (1 << i) | (1 << j)
            best[dst] = np.minimum(best[dst], best[src] + w[i, j])
    return float(best[size - 1])


def matching_weight(pairs, edges: Mapping[tuple[int, int], int]) -> int:
    return sum(edges[(a, b) if a < b else (b, a)] for a, b in pairs)
