"""Quadratic-program view of consensus interdiction: the relaxed
interdicted matrix P(y), the objective f(u, y) = u'(L(y) + J/n)u with
L(y) = I - P(y)^2, its exact gradient in y, the block-coordinate descent
solver, and the first-order stationarity check.

The solver alternates a closed-form u-step with a y-step that minimizes
a linear upper bound of the concave-in-y objective: zero the budget-many
coordinates of the highest gradients, keep the rest at one. The
"potential" variants rank edges by the gradient taken at y = 0 instead,
which is proportional to the power dissipations p_ij (u_i - u_j)^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import BudgetTooLarge
from .graph import EdgeCut, StochasticMatrix, interdict, pattern_connected
from .mincut import edge_connectivity
from .spectral import consensus_objective, solve_shifted

MODES = ("adaptive", "potential_iter", "potential_oneshot")

U_OPT_TOL = 1e-8
CONSTRAINT_TOL = 1e-10
MAX_ITER_CAP = 10 ** 6


def p_of_y(P: StochasticMatrix, y: np.ndarray) -> np.ndarray:
    """Relaxed interdicted matrix: off-diagonal p_ij * y_e, diagonal
    filled so each row sums to one. Symmetric stochastic for any y in
    the unit cube; at binary y it equals the weight-shift removal."""
    pairs = P.edge_pairs
    y = np.asarray(y, dtype=float)
    if y.shape != (len(pairs),):
        raise ValueError(f"y must have length {len(pairs)}")
    M = np.zeros((P.n, P.n))
    for (i, j), ye in zip(pairs, y):
        M[i, j] = M[j, i] = P.entries[i, j] * ye
    d = 1.0 - M.sum(axis=1)
    np.fill_diagonal(M, np.maximum(d, 0.0))
    return M


def relaxed_laplacian(P: StochasticMatrix, y: np.ndarray) -> np.ndarray:
    M = p_of_y(P, y)
    return np.eye(P.n) - M @ M


def f_value(P: StochasticMatrix, y: np.ndarray, u: np.ndarray) -> float:
    """Objective u'(L(y) + J/n)u."""
    u = np.asarray(u, dtype=float)
    A = relaxed_laplacian(P, y) + 1.0 / P.n
    return float(u @ A @ u)


def optimal_u(P: StochasticMatrix, y: np.ndarray, x0: np.ndarray) -> np.ndarray:
    """Minimizer of f(., y) over the hyperplane u'x0 = 1:
    u* = (L(y) + J/n)^-1 x0, normalized so u*'x0 = 1."""
    x0 = np.asarray(x0, dtype=float)
    w = solve_shifted(relaxed_laplacian(P, y), x0)
    denom = float(x0 @ w)
    if denom == 0.0:
        raise ValueError("x0 is orthogonal to the solve output; cannot normalize")
    return w / denom


def gradient_y(P: StochasticMatrix, y: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Exact gradient of f(u, y) with respect to y, one entry per edge:

        p_ij (u_i - u_j)^2 (M_ii + M_jj - 2 M_ij)
          + p_ij sum_{k != i,j} ((u_k - u_j)^2 - (u_k - u_i)^2) (M_ik - M_jk)

    with M = P(y). Equivalently 2 p_ij (u_i - u_j) ((Mu)_i - (Mu)_j);
    at y = 0 this reduces to 2 p_ij (u_i - u_j)^2, so the gradient order
    matches the power-dissipation order.
    """
    pairs = P.edge_pairs
    u = np.asarray(u, dtype=float)
    M = p_of_y(P, y)
    grad = np.empty(len(pairs))
    for e, (i, j) in enumerate(pairs):
        p = P.entries[i, j]
        du2 = (u[i] - u[j]) ** 2
        first = du2 * (M[i, i] + M[j, j] - 2.0 * M[i, j])
        dk = ((u - u[j]) ** 2 - (u - u[i]) ** 2) * (M[i] - M[j])
        cross = float(dk.sum() - dk[i] - dk[j])
        grad[e] = p * (first + cross)
    return grad


@dataclass(frozen=True)
class CipState:
    """One solver iterate: network vector, optimal potentials, objective."""

    y: np.ndarray
    u: np.ndarray
    f_value: float
    iteration: int


@dataclass(frozen=True)
class CipSolution:
    cut: EdgeCut
    objective: float
    trace: tuple[CipState, ...]
    stationary: bool
    iterations: int


@dataclass(frozen=True)
class StationarityReport:
    passed: bool
    u_error: float
    gradient_gap: float
    witness: str


def _rank_edges(grad: np.ndarray) -> np.ndarray:
    # descending gradient, ascending edge id on ties
    return np.lexsort((np.arange(len(grad)), -grad))


def _next_y(
    P: StochasticMatrix,
    grad: np.ndarray,
    budget: int,
    zero_exactly_budget: bool,
) -> np.ndarray:
    """Minimize the linearization over the budget polytope: zero the
    highest-gradient coordinates (ties by edge id), but only while the
    gradients stay positive; zeroing a negative-gradient edge raises the
    linearization and would break the descent chain. With
    ``zero_exactly_budget``, exactly budget-many coordinates go to zero
    regardless of sign (the classical top-l update). A
    candidate whose removal would disconnect the conductance pattern is
    skipped for the next-ranked edge; unreachable while the budget
    respects edge connectivity."""
    m = len(grad)
    order = _rank_edges(grad)
    pairs = P.edge_pairs
    chosen: list[int] = []
    for e in order:
        if len(chosen) == budget:
            break
        if not zero_exactly_budget and grad[e] <= 0.0:
            break
        trial = set(chosen) | {int(e)}
        keep = [p for k, p in enumerate(pairs) if k not in trial]
        if pattern_connected(P.n, keep):
            chosen.append(int(e))
    y = np.ones(m)
    y[chosen] = 0.0
    return y


def cip_solve(
    P: StochasticMatrix,
    x0: np.ndarray,
    budget: int,
    y0: np.ndarray | None = None,
    mode: str = "adaptive",
    max_iter: int | None = None,
    zero_exactly_budget: bool = False,
    kernel: float = 1.0,
) -> CipSolution:
    """Block-coordinate descent for consensus interdiction.

    ``mode``:
      adaptive           gradient taken at the current y (strict descent,
                         finite termination at a first-order stationary
                         point);
      potential_iter     gradient surrogate taken at y = 0 every round,
                         i.e. rank by power dissipation, iterated to a
                         fixpoint (no descent guarantee; a revisited y
                         stops the loop as non-stationary);
      potential_oneshot  a single dissipation ranking from y0, one break
                         decision.

    ``zero_exactly_budget`` forces budget-many zeros even when some
    gradients are negative (the classical top-l update, which can
    ascend); the default zeroes at most budget-many positive-gradient
    edges, the exact linearization minimizer that the descent and
    stationarity guarantees are about.

    Returns the best iterate's cut, its consensus objective, the full
    (f, y) trace, and whether a fixpoint was reached.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    pairs = P.edge_pairs
    m = len(pairs)
    if budget > 0 and budget >= edge_connectivity(P.n, pairs):
        raise BudgetTooLarge(f"budget {budget} is not below the edge connectivity")
    if y0 is None:
        y = np.ones(m)
    else:
        y = np.asarray(y0, dtype=float).copy()
        if y.shape != (m,) or not np.all((y == 0) | (y == 1)):
            raise ValueError("y0 must be a binary vector over the edges")
        if m - y.sum() > budget:
            raise ValueError("y0 removes more edges than the budget allows")
    if max_iter is None:
        max_iter = min(10 * comb(m, budget) if budget else 1, MAX_ITER_CAP)

    x0 = np.asarray(x0, dtype=float)
    trace: list[CipState] = []
    seen: set[bytes] = set()
    best: CipState | None = None
    stationary = False

    for it in range(max_iter):
        u = optimal_u(P, y, x0)
        f = f_value(P, y, u)
        state = CipState(y=y.copy(), u=u, f_value=f, iteration=it)
        trace.append(state)
        if best is None or f < best.f_value:
            best = state
        if budget == 0:
            stationary = True
            break
        if mode == "adaptive":
            grad = gradient_y(P, y, u)
        else:
            grad = gradient_y(P, np.zeros(m), u)
        y_next = _next_y(P, grad, budget, zero_exactly_budget)
        if np.array_equal(y_next, y):
            stationary = True
            break
        if mode == "potential_oneshot":
            u2 = optimal_u(P, y_next, x0)
            trace.append(CipState(y=y_next.copy(), u=u2, f_value=f_value(P, y_next, u2), iteration=it + 1))
            best = trace[-1]
            stationary = True
            break
        seen.add(y.tobytes())
        if y_next.tobytes() in seen:
            break  # cycle: only reachable without the descent guarantee
        y = y_next

    assert best is not None
    cut = EdgeCut.from_y(best.y)
    objective = consensus_objective(interdict(P, cut), x0, kernel=kernel)
    return CipSolution(
        cut=cut,
        objective=objective,
        trace=tuple(trace),
        stationary=stationary,
        iterations=len(trace),
    )


def stationarity_check(
    P: StochasticMatrix,
    x0: np.ndarray,
    u: np.ndarray,
    y: np.ndarray,
    budget: int,
    tol: float = U_OPT_TOL,
) -> StationarityReport:
    """Verify a candidate first-order stationary pair: u must match the
    closed-form minimizer over u'x0 = 1, and the zeroed coordinates of y
    must carry the (budget-many) largest gradients, ties allowed."""
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    if float(len(y) - y.sum()) > budget:
        return StationarityReport(False, np.inf, 0.0, "y removes more edges than the budget")
    u_star = optimal_u(P, y, x0)
    u_err = float(np.max(np.abs(u - u_star)))
    if abs(float(u @ x0) - 1.0) > CONSTRAINT_TOL:
        return StationarityReport(False, u_err, 0.0, "u violates u'x0 = 1")
    if u_err > tol:
        return StationarityReport(False, u_err, 0.0, "u is not the inner minimizer")
    grad = gradient_y(P, y, u)
    zeroed = np.flatnonzero(y == 0.0)
    kept = np.flatnonzero(y != 0.0)
    hi = float(grad[kept].max()) if len(kept) else -np.inf
    if len(zeroed) < budget and hi > tol:
        # slack in the budget: keeping a positive-gradient edge leaves a
        # strictly descending feasible direction
        e_hi = int(kept[np.argmax(grad[kept])])
        return StationarityReport(
            False, u_err, hi, f"kept edge {e_hi} has positive gradient under a slack budget"
        )
    if len(zeroed) == 0:
        return StationarityReport(True, u_err, 0.0, "")
    lo = float(grad[zeroed].min())
    gap = hi - lo
    if gap > tol:
        e_hi = int(kept[np.argmax(grad[kept])])
        e_lo = int(zeroed[np.argmin(grad[zeroed])])
        return StationarityReport(
            False, u_err, gap,
            f"kept edge {e_hi} has higher gradient than zeroed edge {e_lo}",
        )
    return StationarityReport(True, u_err, max(gap, 0.0), "")
