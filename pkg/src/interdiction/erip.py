"""Sorted-edge/min-cut approximation for effective-resistance
interdiction, plus the bottleneck path value it optimizes exactly.

The interdiction routine sorts edges by ascending resistance (ties by
edge id), grows the unweighted prefix graph one edge at a time, and
watches the minimum s-t cut. The first prefix whose cut needs budget+1
edges marks the stop; the returned cut is the min cut of the previous
prefix. Under the budget-below-edge-connectivity assumption this always
terminates with an output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetTooLarge, Disconnected
from .graph import EdgeCut, WeightedGraph
from .mincut import CutResult, edge_connectivity, min_st_cut
from .spectral import effective_resistance


@dataclass(frozen=True)
class EripSolution:
    """cut: removed edges of the input graph; phi_after / reff_after:
    bottleneck value and effective resistance of the interdicted graph;
    k_index: 0-based position, in the ascending-resistance order, of the
    edge whose addition pushed the min cut past the budget (equivalently
    the prefix length whose min cut is returned)."""

    cut: EdgeCut
    phi_after: float
    reff_after: float
    k_index: int
    cut_size_jump: bool = False


def _sorted_edge_ids(g: WeightedGraph) -> list[int]:
    r = g.resistances()
    return sorted(range(g.m), key=lambda e: (r[e], e))


def phi_value(g: WeightedGraph, s: int | None = None, t: int | None = None) -> float:
    """Bottleneck shortest-path value: the minimum over s-t paths of the
    maximum edge resistance on the path. Found by adding edges in
    ascending resistance until s and t first connect."""
    s = g.s if s is None else s
    t = g.t if t is None else t
    if s == t:
        raise ValueError("terminals must differ")
    r = g.resistances()
    parent = list(range(g.n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in _sorted_edge_ids(g):
        i, j = g.pairs[e]
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
        if find(s) == find(t):
            return float(r[e])
    raise Disconnected(f"no path between {s} and {t}")


def erip_interdict(g: WeightedGraph, budget: int) -> EripSolution:
    """Approximate the resistance-maximizing cut of at most ``budget``
    edges. Requires 1 <= budget < edge connectivity; the returned cut is
    bottleneck-optimal and its effective resistance is within a factor
    n*m of the true optimum."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if budget >= edge_connectivity(g.n, g.pairs):
        raise BudgetTooLarge(
            f"budget {budget} is not below the edge connectivity"
        )
    order = _sorted_edge_ids(g)
    prefix: list[tuple[int, int]] = []
    prev = CutResult(cut_value=0, cut_edges=frozenset(), source_side=frozenset({g.s}))
    prev_ids: list[int] = []
    for k, e in enumerate(order):
        prefix.append(g.pairs[e])
        cut = min_st_cut(g.n, prefix, g.s, g.t)
        if cut.cut_value >= budget + 1:
            removed = frozenset(prev_ids[local] for local in prev.cut_edges)
            sol_cut = EdgeCut(removed, g.m)
            remaining = g.without_edges(removed)
            return EripSolution(
                cut=sol_cut,
                phi_after=phi_value(remaining),
                reff_after=effective_resistance(remaining, g.s, g.t),
                k_index=k,
                cut_size_jump=cut.cut_value > budget + 1,
            )
        prev = cut
        prev_ids.append(e)
    raise AssertionError("unreachable: full-graph min cut exceeds the budget by assumption")
