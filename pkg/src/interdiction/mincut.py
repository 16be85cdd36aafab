"""Unit-capacity maximum flow, minimum s-t cut, and edge connectivity.

Dinic-style augmentation: breadth-first level graphs plus blocking-flow
depth-first searches. Undirected unit-capacity edges become a mutually
reverse arc pair with capacity one in each direction, so the max-flow
value counts edge-disjoint paths. The reported cut is canonical: the
edges leaving the set of nodes reachable from s in the final residual
graph, which is deterministic given the edge id order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class CutResult:
    cut_value: int
    cut_edges: frozenset[int]
    source_side: frozenset[int]


def min_st_cut(n: int, pairs: Sequence[tuple[int, int]], s: int, t: int) -> CutResult:
    """Minimum unweighted s-t cut of the graph on ``n`` nodes with the
    given edge list; returns ids into ``pairs``. Disconnected terminals
    yield a cut value of zero with an empty cut set."""
    if not (0 <= s < n and 0 <= t < n) or s == t:
        raise ValueError(f"bad terminals s={s}, t={t} for n={n}")
    # arc storage: arc 2e is i->j, arc 2e+1 is j->i; each is the other's reverse
    head: list[list[int]] = [[] for _ in range(n)]
    to = []
    cap = []
    for e, (i, j) in enumerate(pairs):
        head[i].append(len(to))
        to.append(j)
        cap.append(1)
        head[j].append(len(to))
        to.append(i)
        cap.append(1)

    flow = 0
    level = [0] * n
    it = [0] * n
    while True:
        for v in range(n):
            level[v] = -1
        level[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for a in head[v]:
                if cap[a] > 0 and level[to[a]] < 0:
                    level[to[a]] = level[v] + 1
                    queue.append(to[a])
        if level[t] < 0:
            break
        for v in range(n):
            it[v] = 0
        while True:
            pushed = _dfs(s, t, head, to, cap, level, it)
            if not pushed:
                break
            flow += pushed

    side = _residual_reachable(n, s, head, to, cap)
    cut = frozenset(
        e for e, (i, j) in enumerate(pairs) if (i in side) != (j in side)
    )
    return CutResult(cut_value=flow, cut_edges=cut, source_side=side)


def _dfs(v, t, head, to, cap, level, it):
    if v == t:
        return 1
    while it[v] < len(head[v]):
        a = head[v][it[v]]
        w = to[a]
        if cap[a] > 0 and level[w] == level[v] + 1:
            if _dfs(w, t, head, to, cap, level, it):
                cap[a] -= 1
                cap[a ^ 1] += 1
                return 1
        it[v] += 1
    return 0


def _residual_reachable(n, s, head, to, cap) -> frozenset[int]:
    seen = bytearray(n)
    seen[s] = 1
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for a in head[v]:
            if cap[a] > 0 and not seen[to[a]]:
                seen[to[a]] = 1
                queue.append(to[a])
    return frozenset(v for v in range(n) if seen[v])


def edge_connectivity(n: int, pairs: Sequence[tuple[int, int]]) -> int:
    """Global edge connectivity: the minimum over v != 0 of the min 0-v
    cut (a global min cut separates node 0 from some other node).
    Returns 0 for a disconnected graph or a single-node graph."""
    if n <= 1:
        return 0
    best = len(pairs) + 1
    for v in range(1, n):
        best = min(best, min_st_cut(n, pairs, 0, v).cut_value)
        if best == 0:
            break
    return best
