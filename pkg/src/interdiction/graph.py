"""Graph and conductance-matrix representations, validation, and the
weight-shifting edge-removal operator.

Node ids are 0-based everywhere. Edge ids are positions in the
lexicographically sorted list of node pairs (i, j) with i < j; every
tie-break elsewhere in the library refers to this order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EdgeNotPresent,
    GraphFormatError,
    NegativeEntry,
    NotSymmetric,
    RowSumViolation,
)

ROW_SUM_TOL = 1e-12

GRAPH_MODES = ("resistance", "conductance")
FILE_MODES = GRAPH_MODES + ("stochastic",)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected simple graph with positive edge values and two terminals.

    ``mode`` declares whether edge values are resistances or conductances.
    Edges are stored sorted by (i, j); the position in that order is the
    edge id.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    s: int
    t: int
    mode: str = "resistance"

    def __post_init__(self):
        if self.mode not in GRAPH_MODES:
            raise GraphFormatError(f"unknown graph mode {self.mode!r}")
        if self.n < 1:
            raise GraphFormatError("graph needs at least one node")
        norm = []
        for e in self.edges:
            if len(e) != 3:
                raise GraphFormatError(f"edge {e!r} is not an (i, j, value) triple")
            i, j, v = int(e[0]), int(e[1]), float(e[2])
            if i == j:
                raise GraphFormatError(f"self-loop on node {i}")
            if not (0 <= i < j < self.n):
                raise GraphFormatError(f"edge ({i}, {j}) out of range for n={self.n}")
            if not (np.isfinite(v) and v > 0.0):
                raise GraphFormatError(f"edge ({i}, {j}) has non-positive value {v}")
            norm.append((i, j, v))
        norm.sort(key=lambda e: (e[0], e[1]))
        for a, b in zip(norm, norm[1:]):
            if a[:2] == b[:2]:
                raise GraphFormatError(f"duplicate edge ({a[0]}, {a[1]})")
        object.__setattr__(self, "edges", tuple(norm))
        for name, v in (("s", self.s), ("t", self.t)):
            if not (0 <= v < self.n):
                raise GraphFormatError(f"{name}={v} is not a valid node id")
        if self.s == self.t:
            raise GraphFormatError("source and sink must differ")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j, _ in self.edges)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, _, v in self.edges])

    def resistances(self) -> np.ndarray:
        v = self.values
        return v if self.mode == "resistance" else 1.0 / v

    def conductances(self) -> np.ndarray:
        v = self.values
        return v if self.mode == "conductance" else 1.0 / v

    def conductance_matrix(self) -> np.ndarray:
        """Dense symmetric matrix of edge conductances (zero diagonal)."""
        C = np.zeros((self.n, self.n))
        for (i, j), c in zip(self.pairs, self.conductances()):
            C[i, j] = C[j, i] = c
        return C

    def edge_id(self, i: int, j: int) -> int:
        i, j = (i, j) if i < j else (j, i)
        for e, p in enumerate(self.pairs):
            if p == (i, j):
                return e
        raise EdgeNotPresent(f"edge ({i}, {j}) not in graph")

    def without_edges(self, removed: Iterable[int]) -> "WeightedGraph":
        """Copy of the graph with the given edge ids deleted."""
        drop = set(removed)
        keep = tuple(e for k, e in enumerate(self.edges) if k not in drop)
        return WeightedGraph(self.n, keep, self.s, self.t, self.mode)

    def with_edge(self, i: int, j: int, value: float) -> "WeightedGraph":
        return WeightedGraph(self.n, self.edges + ((i, j, value),), self.s, self.t, self.mode)


@dataclass(frozen=True)
class EdgeCut:
    """Set of removed edge ids plus its complement characteristic vector.

    ``y[e] = 0`` exactly for removed edges; budgets are validated by the
    solvers that enforce them, not here.
    """

    removed: frozenset[int]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "removed", frozenset(int(e) for e in self.removed))
        for e in self.removed:
            if not (0 <= e < self.m):
                raise GraphFormatError(f"edge id {e} out of range for m={self.m}")

    @classmethod
    def from_y(cls, y: Sequence[float]) -> "EdgeCut":
        y = np.asarray(y)
        if not np.all((y == 0) | (y == 1)):
            raise GraphFormatError("characteristic vector must be binary")
        return cls(frozenset(int(e) for e in np.flatnonzero(y == 0)), len(y))

    @property
    def y(self) -> np.ndarray:
        v = np.ones(self.m)
        v[sorted(self.removed)] = 0.0
        return v

    @property
    def size(self) -> int:
        return len(self.removed)

    def pairs(self, edge_pairs: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
        """Removed edges as sorted node pairs under the given edge order."""
        return tuple(edge_pairs[e] for e in sorted(self.removed))


@dataclass(frozen=True)
class StochasticMatrix:
    """Symmetric row-stochastic conductance matrix; the positive
    off-diagonal pattern is the edge set (self-loops live on the diagonal
    and never count as edges)."""

    entries: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise GraphFormatError("stochastic matrix must be square")
        if not np.all(np.isfinite(M)):
            raise GraphFormatError("stochastic matrix has non-finite entries")
        if not np.array_equal(M, M.T):
            raise NotSymmetric("matrix is not symmetric as stored")
        if np.any(M < 0.0):
            i, j = np.argwhere(M < 0.0)[0]
            raise NegativeEntry(f"negative entry {M[i, j]} at ({i}, {j})")
        dev = np.abs(M.sum(axis=1) - 1.0)
        if np.any(dev > ROW_SUM_TOL):
            i = int(np.argmax(dev))
            raise RowSumViolation(f"row {i} sums to {M[i].sum()!r}")
        M = M.copy()
        M.flags.writeable = False
        object.__setattr__(self, "entries", M)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def edge_pairs(self) -> tuple[tuple[int, int], ...]:
        iu, ju = np.nonzero(np.triu(self.entries, k=1))
        return tuple(zip(iu.tolist(), ju.tolist()))

    @property
    def m(self) -> int:
        return len(self.edge_pairs)

    def edge_conductances(self) -> np.ndarray:
        return np.array([self.entries[i, j] for i, j in self.edge_pairs])

    def is_connected(self) -> bool:
        return pattern_connected(self.n, self.edge_pairs)


def validate_stochastic(M) -> StochasticMatrix:
    """Check a raw square matrix and wrap it as a StochasticMatrix.

    Detects asymmetry, negative entries, and row sums deviating from one
    by more than 1e-12. Connectivity of the edge pattern is deliberately
    not required here (the identity matrix is a valid, edgeless input);
    operations that need a connected network check it themselves.
    """
    return StochasticMatrix(np.asarray(M, dtype=float))


def cut_from_node_pairs(P: StochasticMatrix, node_pairs: Iterable[tuple[int, int]]) -> EdgeCut:
    """EdgeCut over P's edge ids from explicit node pairs; a pair with
    zero conductance is not an edge and cannot be interdicted."""
    ids = {p: e for e, p in enumerate(P.edge_pairs)}
    removed = set()
    for i, j in node_pairs:
        key = (i, j) if i < j else (j, i)
        if key not in ids:
            raise EdgeNotPresent(f"edge {key} has zero conductance")
        removed.add(ids[key])
    return EdgeCut(frozenset(removed), len(ids))


def interdict(P: StochasticMatrix, cut: EdgeCut) -> StochasticMatrix:
    """Remove the cut's edges, shifting each removed weight onto the two
    endpoint self-loops so rows keep summing to one."""
    pairs = P.edge_pairs
    if cut.m != len(pairs):
        raise GraphFormatError(f"cut is over m={cut.m} edges, matrix has {len(pairs)}")
    M = np.array(P.entries)
    for e in sorted(cut.removed):
        i, j = pairs[e]
        w = M[i, j]
        if w <= 0.0:
            raise EdgeNotPresent(f"edge ({i}, {j}) has zero conductance")
        M[i, i] += w
        M[j, j] += w
        M[i, j] = M[j, i] = 0.0
    return validate_stochastic(M)


def laplacian(P: StochasticMatrix, squared: bool = False) -> np.ndarray:
    """I - P, or I - P^2 when ``squared`` (the Laplacian of the squared
    conductance pattern used by the consensus objective)."""
    M = P.entries
    if squared:
        M = M @ M
    return np.eye(P.n) - M


def pattern_connected(n: int, pairs: Iterable[tuple[int, int]], start: int = 0) -> bool:
    """True when all n nodes are reachable from ``start`` over the pairs."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in pairs:
        adj[i].append(j)
        adj[j].append(i)
    seen = bytearray(n)
    seen[start] = 1
    queue = deque([start])
    count = 1
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = 1
                count += 1
                queue.append(w)
    return count == n


def st_connected(n: int, pairs: Iterable[tuple[int, int]], s: int, t: int) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in pairs:
        adj[i].append(j)
        adj[j].append(i)
    seen = bytearray(n)
    seen[s] = 1
    queue = deque([s])
    while queue:
        v = queue.popleft()
        if v == t:
            return True
        for w in adj[v]:
            if not seen[w]:
                seen[w] = 1
                queue.append(w)
    return bool(seen[t])


# ---------------------------------------------------------------------------
# JSON graph files
#
# {"n": int, "mode": "resistance"|"conductance"|"stochastic",
#  "edges": [[i, j, value], ...], "s": int, "t": int,
#  "diag": [n values]}          # diag optional, stochastic mode only
# ---------------------------------------------------------------------------

def load_json(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphFormatError(f"cannot read graph file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphFormatError("graph file must hold a JSON object")
    missing = {"n", "mode", "edges", "s", "t"} - doc.keys()
    if missing:
        raise GraphFormatError(f"graph file missing fields: {sorted(missing)}")
    if doc["mode"] not in FILE_MODES:
        raise GraphFormatError(f"unknown mode {doc['mode']!r}")
    if "diag" in doc and doc["mode"] != "stochastic":
        raise GraphFormatError("'diag' is only meaningful for stochastic mode")
    return doc


def weighted_graph_from(doc: dict) -> WeightedGraph:
    """Build a WeightedGraph; stochastic-mode files are read as
    conductance graphs (the diagonal has no effect on effective
    resistance)."""
    mode = doc["mode"] if doc["mode"] in GRAPH_MODES else "conductance"
    try:
        edges = tuple((int(i), int(j), float(v)) for i, j, v in doc["edges"])
    except (TypeError, ValueError) as exc:
        raise GraphFormatError(f"bad edge list: {exc}") from exc
    return WeightedGraph(int(doc["n"]), edges, int(doc["s"]), int(doc["t"]), mode)


def stochastic_from(doc: dict) -> StochasticMatrix:
    """Build a StochasticMatrix from a stochastic-mode file. A missing
    'diag' is filled so each row sums to one."""
    if doc["mode"] != "stochastic":
        raise GraphFormatError("file is not in stochastic mode")
    n = int(doc["n"])
    M = np.zeros((n, n))
    for i, j, v in doc["edges"]:
        i, j, v = int(i), int(j), float(v)
        if not (0 <= i < j < n):
            raise GraphFormatError(f"edge ({i}, {j}) out of range")
        M[i, j] = M[j, i] = v
    if "diag" in doc:
        d = np.asarray(doc["diag"], dtype=float)
        if d.shape != (n,):
            raise GraphFormatError("'diag' must list one value per node")
        M[np.diag_indices(n)] = d
    else:
        M[np.diag_indices(n)] = 1.0 - M.sum(axis=1)
    return validate_stochastic(M)


def graph_to_json(g: WeightedGraph) -> dict:
    return {
        "n": g.n,
        "mode": g.mode,
        "edges": [[i, j, v] for i, j, v in g.edges],
        "s": g.s,
        "t": g.t,
    }


def stochastic_to_json(P: StochasticMatrix, s: int, t: int) -> dict:
    return {
        "n": P.n,
        "mode": "stochastic",
        "edges": [[i, j, float(P.entries[i, j])] for i, j in P.edge_pairs],
        "s": s,
        "t": t,
        "diag": [float(x) for x in np.diag(P.entries)],
    }


def save_json(doc: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
