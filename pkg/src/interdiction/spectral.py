"""Effective resistance, the consensus objective, shifted-Laplacian
solves, and the simulation/flow oracles that cross-check them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import Disconnected, NotAFlow, SingularSystem
from .graph import StochasticMatrix, WeightedGraph, pattern_connected, st_connected

RESIDUAL_TOL = 1e-9
FLOW_TOL = 1e-9


def conductance_input(obj) -> np.ndarray:
    """Dense conductance matrix (zero diagonal) from a WeightedGraph, a
    StochasticMatrix, or a raw symmetric nonnegative array. Self-loops
    have no effect on effective resistance and are dropped."""
    if isinstance(obj, WeightedGraph):
        return obj.conductance_matrix()
    if isinstance(obj, StochasticMatrix):
        C = np.array(obj.entries)
    else:
        C = np.array(obj, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ValueError("conductance input must be square")
        if not np.array_equal(C, C.T):
            raise ValueError("conductance input must be symmetric")
        if np.any(C < 0) or not np.all(np.isfinite(C)):
            raise ValueError("conductances must be finite and nonnegative")
    np.fill_diagonal(C, 0.0)
    return C


def conductance_laplacian(C: np.ndarray) -> np.ndarray:
    L = -np.array(C, dtype=float)
    np.fill_diagonal(L, 0.0)
    np.fill_diagonal(L, -L.sum(axis=1))
    return L


def solve_shifted(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve (L + J/n) z = b with a symmetric positive-definite
    factorization; the shift makes the Laplacian of a connected
    conductance pattern invertible. Raises SingularSystem when the
    factorization fails or the residual exceeds 1e-9 * (1 + ||b||),
    which signals a disconnected network."""
    L = np.asarray(L, dtype=float)
    b = np.asarray(b, dtype=float)
    n = L.shape[0]
    A = L + 1.0 / n
    try:
        z = cho_solve(cho_factor(A), b)
    except LinAlgError as exc:
        raise SingularSystem(f"shifted Laplacian is not positive definite: {exc}") from exc
    resid = np.linalg.norm(A @ z - b)
    if not np.isfinite(resid) or resid > RESIDUAL_TOL * (1.0 + np.linalg.norm(b)):
        raise SingularSystem(f"shifted solve residual {resid} too large")
    return z


def effective_resistance(obj, s: int, t: int) -> float:
    """s-t effective resistance of a conductance input.

    Computed by star-mesh elimination (Gaussian elimination on the
    t-grounded Laplacian, stiffest node first, with denominators formed
    from the live edge conductances). Unlike a plain shifted solve this
    stays accurate when conductances span many orders of magnitude, as
    they do for the near-zero-resistance reduction gadgets.
    """
    C = conductance_input(obj)
    n = C.shape[0]
    if not (0 <= s < n and 0 <= t < n) or s == t:
        raise ValueError(f"bad terminals s={s}, t={t}")
    iu, ju = np.nonzero(np.triu(C, k=1))
    if not st_connected(n, zip(iu.tolist(), ju.tolist()), s, t):
        raise Disconnected(f"nodes {s} and {t} are not connected")
    g = C[:, t].copy()  # conductance to the grounded sink
    C = np.delete(np.delete(C, t, 0), t, 1)
    g = np.delete(g, t)
    si = s if s < t else s - 1
    alive = np.ones(len(g), dtype=bool)
    alive[si] = False  # the source is never eliminated
    while np.any(alive):
        total = C.sum(axis=1) + g  # eliminated rows are zeroed, so this is live
        k = int(np.argmax(np.where(alive, total, -np.inf)))
        S = total[k]
        alive[k] = False
        if S <= 0.0:  # dead-end remnant of another component
            continue
        w = C[k].copy()
        C += np.outer(w, w) / S
        np.fill_diagonal(C, 0.0)
        g += w * (g[k] / S)
        C[k, :] = 0.0
        C[:, k] = 0.0
        g[k] = 0.0
    return 1.0 / g[si]


def consensus_objective(P: StochasticMatrix, x0: np.ndarray, kernel: float = 1.0) -> float:
    """Closed-form aggregate squared deviation of the averaging dynamics
    from consensus, sum_t ||x(t) - xbar||^2.

    Evaluated as z' (I - P^2 + J/n)^-1 z with z = (I - J/n) x0, which
    equals the series literally; the textbook form x0' (...)^-1 x0
    overshoots it by the constant (1'x0)^2 / n. ``kernel`` is a scalar
    weighting multiplier applied to the whole sum.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (P.n,):
        raise ValueError(f"x0 must have length {P.n}")
    _require_squared_connectivity(P)
    M = P.entries
    L = np.eye(P.n) - M @ M
    z0 = x0 - x0.mean()
    z = solve_shifted(L, z0)
    return float(kernel) * float(z0 @ z)


def _require_squared_connectivity(P: StochasticMatrix) -> None:
    # the objective is finite iff the conductance pattern of P^2 is
    # connected (periodic bipartite dynamics never settle)
    A = P.entries > 0.0
    reach2 = (A.astype(np.uint8) @ A.astype(np.uint8)) > 0
    iu, ju = np.nonzero(np.triu(reach2, k=1))
    if not pattern_connected(P.n, zip(iu.tolist(), ju.tolist())):
        raise Disconnected("squared conductance pattern is disconnected")


@dataclass(frozen=True)
class SimulationResult:
    """Truncated series value plus a certificate for the dropped tail."""

    value: float
    steps: int
    tail_bound: float


def simulate_dynamics(
    P: StochasticMatrix,
    x0: np.ndarray,
    horizon: int | None = None,
    tail_tol: float = 1e-12,
) -> SimulationResult:
    """Iterate x <- Px and accumulate ||x - xbar||^2 until the per-step
    term drops below ``tail_tol`` or ``horizon`` steps have run. The
    remaining tail is bounded via the spectral radius of P - J/n."""
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (P.n,):
        raise ValueError(f"x0 must have length {P.n}")
    M = P.entries
    xbar = x.mean()
    rho = float(np.max(np.abs(np.linalg.eigvalsh(M - 1.0 / P.n))))
    cap = horizon if horizon is not None else 10_000_000
    total = 0.0
    steps = 0
    term = np.inf
    while steps <= cap:
        d = x - xbar
        term = float(d @ d)
        total += term
        steps += 1
        if term < tail_tol:
            break
        x = M @ x
    if rho < 1.0:
        tail = term * rho * rho / (1.0 - rho * rho)
    else:
        tail = np.inf
    return SimulationResult(value=total, steps=steps, tail_bound=tail)


@dataclass(frozen=True)
class FlowAssignment:
    """Signed per-edge flow, oriented along the stored (i, j) with i < j,
    together with its declared s-t strength."""

    flows: np.ndarray
    strength: float = 1.0


def check_flow(g: WeightedGraph, f: FlowAssignment) -> None:
    """Raise NotAFlow unless f conserves flow at every interior node and
    pushes the declared strength out of s."""
    flows = np.asarray(f.flows, dtype=float)
    if flows.shape != (g.m,):
        raise NotAFlow(f"flow vector must have length {g.m}")
    net = np.zeros(g.n)
    for (i, j), fe in zip(g.pairs, flows):
        net[i] -= fe
        net[j] += fe
    if abs(net[g.s] + f.strength) > FLOW_TOL:
        raise NotAFlow(f"source imbalance {net[g.s] + f.strength}")
    for v in range(g.n):
        if v in (g.s, g.t):
            continue
        if abs(net[v]) > FLOW_TOL:
            raise NotAFlow(f"conservation violated at node {v} by {net[v]}")


def flow_energy(g: WeightedGraph, f: FlowAssignment) -> float:
    """Energy dissipation sum_e r_e f_e^2 of a checked flow."""
    check_flow(g, f)
    r = g.resistances()
    flows = np.asarray(f.flows, dtype=float)
    return float(r @ (flows * flows))


def electrical_flow(g: WeightedGraph, strength: float = 1.0) -> FlowAssignment:
    """The energy-minimizing s-t flow, recovered from node potentials:
    f_ij = c_ij (z_i - z_j) with z solving the shifted Laplacian."""
    C = g.conductance_matrix()
    b = np.zeros(g.n)
    b[g.s] = strength
    b[g.t] = -strength
    z = solve_shifted(conductance_laplacian(C), b)
    flows = np.array([C[i, j] * (z[i] - z[j]) for i, j in g.pairs])
    return FlowAssignment(flows=flows, strength=strength)
