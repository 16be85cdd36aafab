from collections import deque

import numpy as np
import pytest

from interdiction import (
    ResampleLimit,
    TooSmall,
    WeightedGraph,
    alternating_x0,
    assign_integer_weights,
    build_gadget,
    contracted_reff,
    cut_from_subset,
    edge_connectivity,
    effective_resistance,
    gen_bipartite,
    gen_complete,
    gen_er,
    gen_ring4,
    metropolis,
    validate_stochastic,
)
from interdiction.graph import pattern_connected

from conftest import random_connected_pairs


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def test_gen_complete():
    g = gen_complete(4)
    assert g.m == 6
    assert edge_connectivity(g.n, g.pairs) == 3
    with pytest.raises(TooSmall):
        gen_complete(1)


def test_gen_bipartite_parts():
    g = gen_bipartite(7)  # parts of 3 and 4
    assert g.m == 12
    parts = {i for i, j in g.pairs}
    assert parts == {0, 1, 2}


def test_gen_ring4():
    g = gen_ring4(6)
    deg = np.zeros(6, dtype=int)
    for i, j in g.pairs:
        deg[i] += 1
        deg[j] += 1
    assert g.m == 12
    assert np.all(deg == 4)
    with pytest.raises(TooSmall):
        gen_ring4(4)


def test_gen_er_connectivity_and_determinism():
    g = gen_er(20, 0.5, 3, seed=1)
    assert edge_connectivity(g.n, g.pairs) >= 3
    assert gen_er(20, 0.5, 3, seed=1).pairs == g.pairs
    with pytest.raises(ResampleLimit):
        gen_er(4, 0.05, 3, seed=0)
    with pytest.raises(ValueError):
        gen_er(5, 1.5, 1, seed=0)


# ---------------------------------------------------------------------------
# metropolis weighting and the start vector
# ---------------------------------------------------------------------------

def test_metropolis_path_example():
    g = WeightedGraph(3, ((0, 1, 1.0), (1, 2, 2.0)), 0, 2, "resistance")
    P = metropolis(g)
    assert abs(P.entries[0, 1] - 1 / 3) < 1e-15
    assert abs(P.entries[1, 2] - 2 / 3) < 1e-15
    assert np.allclose(np.diag(P.entries), [2 / 3, 0.0, 1 / 3], atol=1e-15)


def test_metropolis_single_edge():
    g = WeightedGraph(2, ((0, 1, 4.0),), 0, 1, "resistance")
    P = metropolis(g)
    assert P.entries[0, 1] == 1.0
    assert np.all(np.diag(P.entries) == 0.0)


def test_metropolis_validates_and_needs_integers():
    rng = np.random.default_rng(60)
    for _ in range(10):
        pairs = random_connected_pairs(rng, int(rng.integers(3, 10)))
        g = WeightedGraph(len({v for p in pairs for v in p} | set(range(max(max(p) for p in pairs) + 1))),
                          tuple((i, j, 1.0) for i, j in pairs), 0, 1, "resistance")
        P = metropolis(assign_integer_weights(g, rng))
        validate_stochastic(P.entries)  # idempotent revalidation
    with pytest.raises(ValueError):
        metropolis(WeightedGraph(2, ((0, 1, 0.5),), 0, 1, "resistance"))


def test_alternating_x0():
    assert np.array_equal(alternating_x0(4), [0, 1, 0, 1])
    assert np.array_equal(alternating_x0(1), [0])
    assert np.array_equal(alternating_x0(5), [0, 1, 0, 1, 0])


# ---------------------------------------------------------------------------
# gadget
# ---------------------------------------------------------------------------

def bfs_dist(g: WeightedGraph, s: int) -> list[int]:
    adj = [[] for _ in range(g.n)]
    for i, j in g.pairs:
        adj[i].append(j)
        adj[j].append(i)
    dist = [-1] * g.n
    dist[s] = 0
    q = deque([s])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def test_gadget_counts_and_single_edge_base():
    base = WeightedGraph(2, ((0, 1, 1.0),), 0, 1, "resistance")
    gg = build_gadget(base, a=16.0, delta=0.0)
    assert gg.gadget.n == 5
    assert gg.gadget.m == 5
    rng = np.random.default_rng(61)
    for _ in range(5):
        n = int(rng.integers(2, 7))
        pairs = random_connected_pairs(rng, n, 0.6)
        b = WeightedGraph(n, tuple((i, j, 1.0) for i, j in pairs), 0, n - 1, "resistance")
        gg = build_gadget(b, a=float(n ** 4), delta=1e-4, variant="dks")
        assert gg.gadget.n == b.n + b.m + 2
        assert gg.gadget.m == 3 * b.m + b.n


def test_gadget_k3_clique_value():
    gg = build_gadget(gen_complete(3), a=81.0, delta=0.0)
    reff = effective_resistance(gg.gadget, gg.gadget.s, gg.gadget.t)
    assert abs(reff - 82 / 3) < 1e-6
    assert abs(contracted_reff(81.0, [(3, 3)]) - 82 / 3) < 1e-12


def test_gadget_left_vertices_have_degree_three_and_diameter():
    gg = build_gadget(gen_complete(4), a=256.0, delta=0.0)
    deg = np.zeros(gg.gadget.n, dtype=int)
    for i, j in gg.gadget.pairs:
        deg[i] += 1
        deg[j] += 1
    for v in gg.v_left:
        assert deg[v] == 3
    dist = bfs_dist(gg.gadget, gg.gadget.s)
    assert dist[gg.gadget.t] == 3
    assert max(dist) == 3


def test_cut_from_subset_sizes():
    rng = np.random.default_rng(62)
    for _ in range(10):
        n = int(rng.integers(3, 8))
        pairs = random_connected_pairs(rng, n, 0.6)
        base = WeightedGraph(n, tuple((i, j, 1.0) for i, j in pairs), 0, n - 1, "resistance")
        gg = build_gadget(base, a=float(n ** 4), delta=1e-4, variant="dks")
        assert cut_from_subset(gg, set()).size == 0
        assert cut_from_subset(gg, range(n)).size == base.m
        S = {int(v) for v in np.flatnonzero(rng.random(n) < 0.5)}
        inside_complement = sum(1 for i, j in base.pairs if i not in S and j not in S)
        assert cut_from_subset(gg, S).size == base.m - inside_complement


def test_cut_from_subset_resistance_sandwich():
    rng = np.random.default_rng(63)
    delta = 1e-4
    for _ in range(10):
        n = int(rng.integers(3, 8))
        pairs = random_connected_pairs(rng, n, 0.6)
        base = WeightedGraph(n, tuple((i, j, 1.0) for i, j in pairs), 0, n - 1, "resistance")
        gg = build_gadget(base, a=1.0, delta=delta, variant="dks")
        S = {int(v) for v in np.flatnonzero(rng.random(n) < 0.4)}
        if len(S) == n:
            S.pop()
        cut = cut_from_subset(gg, S)
        reff = effective_resistance(gg.gadget.without_edges(cut.removed), gg.gadget.s, gg.gadget.t)
        k = n - len(S)
        assert 1.0 / k - 1e-9 <= reff <= 1.0 / k + 2 * delta + 1e-9


def test_contracted_reff_formulas():
    assert contracted_reff(5.0, [(1, 1)]) == 6.0
    for r in (3, 4, 5):
        a = float(r ** 4)
        expect = a / (r * (r - 1) // 2) + 1.0 / r
        assert abs(contracted_reff(a, [(r * (r - 1) // 2, r)]) - expect) < 1e-12
    with pytest.raises(ValueError):
        contracted_reff(1.0, [])
    with pytest.raises(ValueError):
        contracted_reff(1.0, [(0, 1)])


def test_contracted_matches_generic_solver_on_split_components():
    # base: two disjoint triangles joined only through the gadget frame;
    # keep only the inner edges of each triangle's clique structure
    t1 = [(0, 1), (0, 2), (1, 2)]
    t2 = [(3, 4), (3, 5), (4, 5)]
    base = WeightedGraph(6, tuple((i, j, 1.0) for i, j in t1 + t2), 0, 5, "resistance")
    gg = build_gadget(base, a=100.0, delta=0.0)
    reff = effective_resistance(gg.gadget, gg.gadget.s, gg.gadget.t)
    assert abs(reff - contracted_reff(100.0, [(3, 3), (3, 3)])) < 1e-6
