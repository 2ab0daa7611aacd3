"""Shared graph builders and brute-force oracles for the test suite."""

from __future__ import annotations

from fractions import Fraction

import networkx as nx
import numpy as np

from bidiexp.graph import Graph
from bidiexp.search import LayerCostProfile


def from_nx(G: nx.Graph) -> Graph:
    G = nx.convert_node_labels_to_integers(G)
    edges = list(G.edges())
    src = [u for u, _ in edges]
    dst = [v for _, v in edges]
    return Graph.from_edges(G.number_of_nodes(), src, dst)


def from_edge_pairs(n: int, edges) -> Graph:
    edges = list(edges)
    return Graph.from_edges(n, [u for u, _ in edges], [v for _, v in edges])


def path_graph(n: int) -> Graph:
    return from_edge_pairs(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    """Centre 0 with leaves 1..leaves."""
    return from_edge_pairs(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle_graph(n: int) -> Graph:
    return from_edge_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def random_connected_graph(rng: np.random.Generator, n: int) -> Graph:
    """Random spanning tree plus a random number of extra edges."""
    if n == 1:
        return Graph.from_edges(1, [], [])
    parents = [int(rng.integers(0, i)) for i in range(1, n)]
    src = list(range(1, n))
    dst = parents
    extra = int(rng.integers(0, 2 * n + 1)) if rng.random() < 0.8 else 0
    src += rng.integers(0, n, extra).tolist()
    dst += rng.integers(0, n, extra).tolist()
    perm = rng.permutation(n)
    return Graph.from_edges(n, perm[src], perm[dst])


def random_suite(seed: int, count: int, max_n: int, min_n: int = 2) -> list[Graph]:
    rng = np.random.default_rng(seed)
    return [random_connected_graph(rng, int(rng.integers(min_n, max_n + 1))) for _ in range(count)]


def all_pairs_distances(graph: Graph) -> np.ndarray:
    """Distance matrix from plain queue-based BFS, one source at a time."""
    n = graph.n
    dist = np.full((n, n), -1, dtype=np.int64)
    adj = [graph.adjacency(v).tolist() for v in range(n)]
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue = [s]
        for u in queue:
            for w in adj[u]:
                if row[w] < 0:
                    row[w] = row[u] + 1
                    queue.append(w)
    return dist


def layer_degree_sums(graph: Graph, dist: np.ndarray) -> list[np.ndarray]:
    """``L[s][j]`` is the degree sum of vertices at distance ``j`` from ``s``."""
    deg = graph.degrees
    return [np.bincount(dist[s], weights=deg, minlength=1).astype(np.int64) for s in range(graph.n)]


def oracle_profile(graph: Graph, dist: np.ndarray, sums: list[np.ndarray], s: int, t: int) -> LayerCostProfile:
    d = int(dist[s, t])
    cs = [int(sums[s][i - 1]) for i in range(1, d + 1)]
    ct = [int(sums[t][d - i]) for i in range(1, d + 1)]
    return LayerCostProfile.from_costs(cs, ct, graph.m)


def oracle_optimal_cost(cs, ct) -> int:
    d = len(cs)
    return min(sum(cs[:k]) + sum(ct[k:]) for k in range(d + 1))


# Naive landmark definitions, written straight from the definitions with
# exact rational growth tests.


def naive_cheap(cs, ct, m: int, alpha: float):
    budget = float(m) ** alpha * (1 + 1e-9)
    d = len(cs)
    cheap_s = None
    for j in range(1, d + 1):
        if sum(cs[:j]) <= budget:
            cheap_s = j
    cheap_t = None
    for j in range(d, 0, -1):
        if sum(ct[j - 1 :]) <= budget:
            cheap_t = j
    return cheap_s, cheap_t


def naive_expan(cs, ct, b: Fraction):
    """Check every prefix and suffix against the definition, in exact integers."""
    num, den = b.numerator, b.denominator
    d = len(cs)
    expan_s = max(j for j in range(1, d + 1) if all(cs[k] * den >= num * cs[k - 1] for k in range(1, j)))
    expan_t = min(j for j in range(1, d + 1) if all(ct[k - 2] * den >= num * ct[k - 1] for k in range(j + 1, d + 1)))
    return expan_s, expan_t


def naive_b_plus(cs, ct, b: Fraction) -> Fraction:
    ratios = [Fraction(cs[k], cs[k - 1]) for k in range(1, len(cs))]
    ratios += [Fraction(ct[k - 1], ct[k]) for k in range(1, len(ct))]
    return max([b] + ratios)


def naive_rho(cs, ct, m: int, alpha: float, b: Fraction) -> Fraction | None:
    return rho_from_landmarks(naive_cheap(cs, ct, m, alpha), naive_expan(cs, ct, b), len(cs))


def rho_from_landmarks(cheap, expan, d: int) -> Fraction | None:
    """Segment ratio from the four landmarks; None when a cheap landmark is undefined."""
    cheap_s, cheap_t = cheap
    if cheap_s is None or cheap_t is None:
        return None
    expan_s, expan_t = expan
    S1, S2 = expan_s, cheap_t - expan_s - 1
    T1, T2 = d - expan_t + 1, expan_t - cheap_s - 1
    return Fraction(max(S2, T2), min(S1, T1))
