"""Benchmark graph families with Metropolis weighting, the experiment
initial vector, and the bipartite reduction-gadget constructions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError, ResampleLimit, TooSmall
from .graph import EdgeCut, StochasticMatrix, WeightedGraph, validate_stochastic
from .mincut import edge_connectivity

RESAMPLE_ATTEMPTS = 1000
ZERO_RESISTANCE = 1e-12

GADGET_VARIANTS = ("clique", "dks")


def _unit_graph(n: int, pairs: list[tuple[int, int]]) -> WeightedGraph:
    edges = tuple((i, j, 1.0) for i, j in pairs)
    return WeightedGraph(n, edges, s=0, t=n - 1, mode="resistance")


def gen_complete(n: int) -> WeightedGraph:
    if n < 2:
        raise TooSmall("complete graph needs n >= 2")
    return _unit_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def gen_bipartite(n: int) -> WeightedGraph:
    """Complete bipartite graph with part sizes floor(n/2) and ceil(n/2);
    part one is nodes 0 .. floor(n/2)-1."""
    if n < 2:
        raise TooSmall("bipartite graph needs n >= 2")
    half = n // 2
    return _unit_graph(n, [(i, j) for i in range(half) for j in range(half, n)])


def gen_ring4(n: int) -> WeightedGraph:
    """Nodes on a cycle, each joined to its two nearest neighbors on
    either side (a 4-regular circulant)."""
    if n < 5:
        raise TooSmall("4-regular ring needs n >= 5")
    pairs = set()
    for i in range(n):
        for d in (1, 2):
            j = (i + d) % n
            pairs.add((min(i, j), max(i, j)))
    return _unit_graph(n, sorted(pairs))


def gen_er(n: int, p: float, connectivity: int, seed: int) -> WeightedGraph:
    """Erdos-Renyi draw, resampled until the graph is
    ``connectivity``-edge-connected; raises ResampleLimit after 1000
    failed attempts."""
    if n < 2:
        raise TooSmall("random graph needs n >= 2")
    if not (0.0 < p < 1.0):
        raise ValueError("edge probability must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for _ in range(RESAMPLE_ATTEMPTS):
        mask = rng.random(len(all_pairs)) < p
        pairs = [pr for pr, keep in zip(all_pairs, mask) if keep]
        if edge_connectivity(n, pairs) >= connectivity:
            return _unit_graph(n, pairs)
    raise ResampleLimit(
        f"no {connectivity}-edge-connected draw in {RESAMPLE_ATTEMPTS} attempts"
    )


def assign_integer_weights(g: WeightedGraph, seed_or_rng, low: int = 1, high: int = 10) -> WeightedGraph:
    """Replace edge values with integers drawn uniformly from
    {low, ..., high}, in edge id order."""
    rng = seed_or_rng if isinstance(seed_or_rng, np.random.Generator) else np.random.default_rng(seed_or_rng)
    w = rng.integers(low, high + 1, size=g.m)
    edges = tuple((i, j, float(wv)) for (i, j), wv in zip(g.pairs, w))
    return WeightedGraph(g.n, edges, g.s, g.t, g.mode)


def metropolis(g: WeightedGraph) -> StochasticMatrix:
    """Metropolis weighting of an integer-weighted graph:
    P_ij = w_ij / max(row-sum_i, row-sum_j), diagonal filling each row
    to one."""
    w = g.values
    if np.any(w != np.round(w)) or np.any(w < 1):
        raise ValueError("metropolis weighting needs positive integer weights")
    W = np.zeros((g.n, g.n))
    for (i, j), wv in zip(g.pairs, w):
        W[i, j] = W[j, i] = wv
    rows = W.sum(axis=1)
    P = np.zeros((g.n, g.n))
    for (i, j), wv in zip(g.pairs, w):
        P[i, j] = P[j, i] = wv / max(rows[i], rows[j])
    np.fill_diagonal(P, np.maximum(1.0 - P.sum(axis=1), 0.0))
    return validate_stochastic(P)


def alternating_x0(n: int) -> np.ndarray:
    """Initial vector with 0 at odd and 1 at even 1-based positions."""
    if n < 1:
        raise TooSmall("need at least one node")
    return (np.arange(n) % 2).astype(float)


@dataclass(frozen=True)
class GadgetGraph:
    """Bipartite reduction gadget built from a base graph: one left
    vertex per base edge, one right vertex per base node, a source tied
    to the left side and a sink tied to the right side. Always has
    n + m + 2 nodes and 3m + n edges."""

    base: WeightedGraph
    gadget: WeightedGraph
    v_left: tuple[int, ...]   # gadget node of each base edge id
    v_right: tuple[int, ...]  # gadget node of each base node
    e_left: tuple[int, ...]   # gadget edge ids {s, v_e}
    e_one: tuple[int, ...]    # gadget edge ids {v_e, v_i} and {v_e, v_j}
    e_right: tuple[int, ...]  # gadget edge ids {v_i, t}
    a: float
    delta: float
    variant: str


def build_gadget(base: WeightedGraph, a: float, delta: float, variant: str = "clique") -> GadgetGraph:
    """Construct the gadget in one of two resistance profiles:

    clique : source edges a, inner edges delta (0 allowed, stored as
             1e-12 to keep solves well-posed), sink edges 1;
    dks    : source and inner edges both delta, sink edges 1.
    """
    if variant not in GADGET_VARIANTS:
        raise GraphFormatError(f"unknown gadget variant {variant!r}")
    if base.n < 2:
        raise TooSmall("gadget base needs n >= 2")
    inner = delta if delta > 0.0 else ZERO_RESISTANCE
    source_r = float(a) if variant == "clique" else inner
    nb, mb = base.n, base.m
    s_node = 0
    t_node = 1 + mb + nb
    v_left = tuple(1 + e for e in range(mb))
    v_right = tuple(1 + mb + i for i in range(nb))
    edges: list[tuple[int, int, float]] = []
    for e, (i, j) in enumerate(base.pairs):
        edges.append((s_node, v_left[e], source_r))
        edges.append((min(v_left[e], v_right[i]), max(v_left[e], v_right[i]), inner))
        edges.append((min(v_left[e], v_right[j]), max(v_left[e], v_right[j]), inner))
    for i in range(nb):
        edges.append((v_right[i], t_node, 1.0))
    gadget = WeightedGraph(1 + mb + nb + 1, tuple(edges), s=s_node, t=t_node, mode="resistance")
    assert gadget.n == nb + mb + 2 and gadget.m == 3 * mb + nb
    ids = {p: k for k, p in enumerate(gadget.pairs)}
    e_left = tuple(ids[(s_node, v_left[e])] for e in range(mb))
    e_one = tuple(
        ids[(min(v_left[e], v_right[v]), max(v_left[e], v_right[v]))]
        for e, (i, j) in enumerate(base.pairs)
        for v in (i, j)
    )
    e_right = tuple(ids[(v_right[i], t_node)] for i in range(nb))
    return GadgetGraph(
        base=base,
        gadget=gadget,
        v_left=v_left,
        v_right=v_right,
        e_left=e_left,
        e_one=e_one,
        e_right=e_right,
        a=float(a),
        delta=float(delta),
        variant=variant,
    )


def cut_from_subset(gg: GadgetGraph, subset: Iterable[int]) -> EdgeCut:
    """Gadget edge cut associated with a base node subset S: source
    edges of left vertices whose base edge lies inside S, plus the
    S-side inner edges of boundary base edges. Its size is always
    m - |E[V \\ S]|."""
    S = set(int(v) for v in subset)
    for v in S:
        if not (0 <= v < gg.base.n):
            raise GraphFormatError(f"node {v} outside the base graph")
    ids = {p: k for k, p in enumerate(gg.gadget.pairs)}
    removed = set()
    for e, (i, j) in enumerate(gg.base.pairs):
        vi, vj, vl = gg.v_right[i], gg.v_right[j], gg.v_left[e]
        if i in S and j in S:
            removed.add(ids[(min(gg.gadget.s, vl), max(gg.gadget.s, vl))])
        elif i in S:
            removed.add(ids[(min(vi, vl), max(vi, vl))])
        elif j in S:
            removed.add(ids[(min(vj, vl), max(vj, vl))])
    return EdgeCut(frozenset(removed), gg.gadget.m)


def contracted_reff(a: float, components: Sequence[tuple[int, int]]) -> float:
    """Effective resistance after contracting each inner connected
    component: parallel branches of resistance a/n_k + 1/m_k, where n_k
    counts left and m_k counts right vertices of component k."""
    if not components:
        raise ValueError("need at least one component")
    acc = 0.0
    for n_k, m_k in components:
        if n_k < 1 or m_k < 1:
            raise ValueError("component counts must be at least 1")
        acc += 1.0 / (a / n_k + 1.0 / m_k)
    return 1.0 / acc
