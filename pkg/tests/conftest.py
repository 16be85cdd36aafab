"""Shared fixtures and instance builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from interdiction import (
    FlowAssignment,
    StochasticMatrix,
    WeightedGraph,
    assign_integer_weights,
    metropolis,
    validate_stochastic,
)
from interdiction.graph import pattern_connected

TRIANGLE_P = [
    [17 / 30, 1 / 3, 1 / 10],
    [1 / 3, 1 / 3, 1 / 3],
    [1 / 10, 1 / 3, 17 / 30],
]

X0_TRIANGLE = np.array([1.0, 0.0, -1.0])  # e_0 - e_2


@pytest.fixture
def triangle() -> StochasticMatrix:
    return validate_stochastic(TRIANGLE_P)


def random_connected_pairs(rng: np.random.Generator, n: int, p: float = 0.5) -> list[tuple[int, int]]:
    """Erdos-Renyi edge set, resampled until connected."""
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    while True:
        pairs = [pr for pr in all_pairs if rng.random() < p]
        if pattern_connected(n, pairs):
            return pairs


def random_resistance_graph(rng: np.random.Generator, n: int, p: float = 0.5,
                            lo: float = 0.1, hi: float = 10.0) -> WeightedGraph:
    pairs = random_connected_pairs(rng, n, p)
    edges = tuple((i, j, float(rng.uniform(lo, hi))) for i, j in pairs)
    return WeightedGraph(n, edges, s=0, t=n - 1, mode="resistance")


def random_metropolis(rng: np.random.Generator, n: int, p: float = 0.6) -> StochasticMatrix:
    """Random connected Metropolis matrix whose squared pattern is also
    connected (so the consensus objective is finite)."""
    while True:
        pairs = random_connected_pairs(rng, n, p)
        g = WeightedGraph(n, tuple((i, j, 1.0) for i, j in pairs), 0, n - 1, "resistance")
        P = metropolis(assign_integer_weights(g, rng))
        A = (P.entries > 0).astype(np.uint8)
        sq = (A @ A) > 0
        iu, ju = np.nonzero(np.triu(sq, k=1))
        if pattern_connected(n, zip(iu.tolist(), ju.tolist())):
            return P


def random_unit_flow(g: WeightedGraph, rng: np.random.Generator, paths: int = 4) -> FlowAssignment:
    """Unit s-t flow assembled from loop-erased random walks."""
    index = {p: e for e, p in enumerate(g.pairs)}
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for i, j in g.pairs:
        adj[i].append(j)
        adj[j].append(i)
    weights = rng.dirichlet(np.ones(paths))
    flows = np.zeros(g.m)
    for w in weights:
        walk = [g.s]
        while walk[-1] != g.t:
            nxt = int(adj[walk[-1]][rng.integers(len(adj[walk[-1]]))])
            if nxt in walk:  # erase the loop
                walk = walk[: walk.index(nxt) + 1]
            else:
                walk.append(nxt)
        for a, b in zip(walk, walk[1:]):
            if a < b:
                flows[index[(a, b)]] += w
            else:
                flows[index[(b, a)]] -= w
    return FlowAssignment(flows=flows, strength=1.0)


def connected_labeled_graphs(n: int):
    """Yield the edge list of every connected labeled simple graph on n
    nodes (exhaustive over all 2^C(n,2) subsets)."""
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = len(all_pairs)
    for mask in range(1 << m):
        pairs = [all_pairs[e] for e in range(m) if mask >> e & 1]
        if len(pairs) >= n - 1 and pattern_connected(n, pairs):
            yield pairs
