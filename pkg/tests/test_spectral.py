import numpy as np
import pytest

from interdiction import (
    Disconnected,
    FlowAssignment,
    NotAFlow,
    SingularSystem,
    WeightedGraph,
    consensus_objective,
    effective_resistance,
    electrical_flow,
    flow_energy,
    interdict,
    laplacian,
    simulate_dynamics,
    solve_shifted,
    validate_stochastic,
)
from interdiction.graph import cut_from_node_pairs
from interdiction.spectral import conductance_laplacian

from conftest import TRIANGLE_P, X0_TRIANGLE, random_metropolis, random_resistance_graph, random_unit_flow


def triangle_without(pair):
    P = validate_stochastic(TRIANGLE_P)
    return interdict(P, cut_from_node_pairs(P, [pair]))


# ---------------------------------------------------------------------------
# solve_shifted
# ---------------------------------------------------------------------------

def test_solve_shifted_ones():
    P = random_metropolis(np.random.default_rng(0), 6)
    z = solve_shifted(laplacian(P), np.ones(6))
    assert np.max(np.abs(z - 1.0)) < 1e-9


def test_solve_shifted_triangle_value():
    Q = triangle_without((0, 2))
    L = laplacian(Q, squared=True)
    b = np.array([1.0, 0.0, -1.0])
    z = solve_shifted(L, b)
    assert abs(b @ z - 18 / 5) < 1e-9


def test_solve_shifted_residual_on_random_systems():
    rng = np.random.default_rng(1)
    for _ in range(20):
        P = random_metropolis(rng, int(rng.integers(3, 12)))
        L = laplacian(P)
        b = rng.normal(size=P.n)
        z = solve_shifted(L, b)
        A = L + 1.0 / P.n
        assert np.linalg.norm(A @ z - b) <= 1e-9 * (1 + np.linalg.norm(b))


def test_solve_shifted_disconnected_is_singular():
    P = validate_stochastic(np.eye(4))
    with pytest.raises(SingularSystem):
        solve_shifted(laplacian(P), np.arange(4.0))


# ---------------------------------------------------------------------------
# effective_resistance
# ---------------------------------------------------------------------------

def test_single_edge_resistance():
    g = WeightedGraph(2, ((0, 1, 2.0),), 0, 1, "resistance")
    assert abs(effective_resistance(g, 0, 1) - 2.0) < 1e-12


def test_parallel_law_with_summed_conductances():
    # parallel 1 ohm and 5 ohm edges collapse to one edge of conductance 6/5
    g = WeightedGraph(2, ((0, 1, 1.0 + 1 / 5),), 0, 1, "conductance")
    assert abs(effective_resistance(g, 0, 1) - 5 / 6) < 1e-12


def test_triangle_squared_resistances():
    Q = triangle_without((1, 2))
    sq = Q.entries @ Q.entries
    assert abs(effective_resistance(sq, 0, 2) - 400 / 71) < 1e-9
    Q = triangle_without((0, 2))
    sq = Q.entries @ Q.entries
    assert abs(effective_resistance(sq, 0, 2) - 18 / 5) < 1e-9


def test_resistance_symmetry_and_disconnect():
    rng = np.random.default_rng(2)
    g = random_resistance_graph(rng, 8)
    assert abs(effective_resistance(g, 0, 7) - effective_resistance(g, 7, 0)) < 1e-12
    split = WeightedGraph(4, ((0, 1, 1.0), (2, 3, 1.0)), 0, 3, "resistance")
    with pytest.raises(Disconnected):
        effective_resistance(split, 0, 3)


def test_series_parallel_formulas():
    rng = np.random.default_rng(3)
    for _ in range(10):
        k = int(rng.integers(2, 6))
        r = rng.uniform(0.1, 10.0, size=k)
        chain = WeightedGraph(
            k + 1, tuple((i, i + 1, float(r[i])) for i in range(k)), 0, k, "resistance"
        )
        assert abs(effective_resistance(chain, 0, k) - r.sum()) < 1e-12 * max(1, r.sum())
        # parallel bundle of k two-hop branches
        branches = tuple(
            e for i in range(k) for e in ((0, 2 + i, float(r[i] / 2)), (1, 2 + i, float(r[i] / 2)))
        )
        bundle = WeightedGraph(k + 2, branches, 0, 1, "resistance")
        expect = 1.0 / np.sum(1.0 / r)
        assert abs(effective_resistance(bundle, 0, 1) - expect) < 1e-12 * max(1, expect)


def test_starmesh_matches_shifted_solve():
    rng = np.random.default_rng(4)
    for _ in range(20):
        g = random_resistance_graph(rng, int(rng.integers(4, 10)))
        C = g.conductance_matrix()
        b = np.zeros(g.n)
        b[g.s], b[g.t] = 1.0, -1.0
        z = solve_shifted(conductance_laplacian(C), b)
        assert abs(effective_resistance(g, g.s, g.t) - b @ z) < 1e-12


# ---------------------------------------------------------------------------
# consensus objective and simulation
# ---------------------------------------------------------------------------

def test_consensus_zero_at_consensus():
    P = random_metropolis(np.random.default_rng(5), 7)
    assert abs(consensus_objective(P, 3.2 * np.ones(7))) < 1e-12


def test_consensus_triangle_value():
    assert abs(consensus_objective(triangle_without((1, 2)), X0_TRIANGLE) - 400 / 71) < 1e-9


def test_consensus_matches_simulation_with_offset():
    rng = np.random.default_rng(6)
    for _ in range(10):
        P = random_metropolis(rng, int(rng.integers(3, 10)))
        x0 = rng.normal(size=P.n) + rng.normal()  # nonzero mean exercises the offset
        closed = consensus_objective(P, x0)
        sim = simulate_dynamics(P, x0, tail_tol=1e-14)
        assert abs(closed - sim.value) <= 1e-6 + sim.tail_bound


def test_consensus_kernel_scaling():
    P = random_metropolis(np.random.default_rng(7), 6)
    x0 = np.arange(6.0)
    assert abs(consensus_objective(P, x0, kernel=2.0) - 2 * consensus_objective(P, x0)) < 1e-12


def test_consensus_rejects_periodic_pattern():
    P = validate_stochastic(np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(Disconnected):
        consensus_objective(P, np.array([1.0, 0.0]))


def test_simulate_consensus_start_and_uniform_matrix():
    P = random_metropolis(np.random.default_rng(8), 5)
    assert simulate_dynamics(P, np.ones(5) * 0.4).value == 0.0
    n = 4
    J = validate_stochastic(np.full((n, n), 1.0 / n))
    x0 = np.array([2.0, -1.0, 0.5, 3.0])
    d = x0 - x0.mean()
    res = simulate_dynamics(J, x0)
    assert abs(res.value - d @ d) < 1e-12


def test_simulate_triangle_converges():
    res = simulate_dynamics(triangle_without((1, 2)), X0_TRIANGLE, tail_tol=1e-14)
    assert abs(res.value - 400 / 71) < 1e-6
    assert res.tail_bound < 1e-6


# ---------------------------------------------------------------------------
# flows
# ---------------------------------------------------------------------------

def test_flow_energy_single_edge():
    g = WeightedGraph(2, ((0, 1, 3.0),), 0, 1, "resistance")
    assert flow_energy(g, FlowAssignment(np.array([1.0]))) == 3.0


def test_flow_energy_half_half_split():
    # two 1-ohm routes realized as two-hop branches of 1/2 + 1/2 ohm
    g = WeightedGraph(
        4, ((0, 2, 0.5), (1, 2, 0.5), (0, 3, 0.5), (1, 3, 0.5)), 0, 1, "resistance"
    )
    # edge ids sort to (0,2), (0,3), (1,2), (1,3); the last two run against
    # their stored orientation
    f = FlowAssignment(np.array([0.5, 0.5, -0.5, -0.5]))
    assert abs(flow_energy(g, f) - 0.5) < 1e-12
    assert abs(effective_resistance(g, 0, 1) - 0.5) < 1e-12


def test_flow_conservation_enforced():
    g = WeightedGraph(3, ((0, 1, 1.0), (1, 2, 1.0)), 0, 2, "resistance")
    with pytest.raises(NotAFlow):
        flow_energy(g, FlowAssignment(np.array([1.0, 0.5])))
    with pytest.raises(NotAFlow):
        flow_energy(g, FlowAssignment(np.array([0.5, 0.5]), strength=1.0))


def test_electrical_flow_attains_thomson_minimum():
    rng = np.random.default_rng(9)
    for _ in range(10):
        g = random_resistance_graph(rng, int(rng.integers(4, 9)))
        f = electrical_flow(g)
        reff = effective_resistance(g, g.s, g.t)
        assert abs(flow_energy(g, f) - reff) < 1e-9


def test_thomson_lower_bound_random_flows():
    rng = np.random.default_rng(10)
    for _ in range(30):
        g = random_resistance_graph(rng, int(rng.integers(4, 9)))
        f = random_unit_flow(g, rng)
        assert flow_energy(g, f) >= effective_resistance(g, g.s, g.t) - 1e-9


def test_rayleigh_monotonicity_random_additions():
    rng = np.random.default_rng(11)
    for _ in range(30):
        g = random_resistance_graph(rng, int(rng.integers(4, 9)), p=0.4)
        missing = [
            (i, j)
            for i in range(g.n)
            for j in range(i + 1, g.n)
            if (i, j) not in set(g.pairs)
        ]
        if not missing:
            continue
        i, j = missing[int(rng.integers(len(missing)))]
        bigger = g.with_edge(i, j, float(rng.uniform(0.1, 10.0)))
        assert effective_resistance(bigger, g.s, g.t) <= effective_resistance(g, g.s, g.t) + 1e-9


def test_objective_equals_squared_conductance_resistance():
    rng = np.random.default_rng(12)
    for _ in range(10):
        P = random_metropolis(rng, int(rng.integers(3, 10)))
        s, t = 0, P.n - 1
        x0 = np.zeros(P.n)
        x0[s], x0[t] = 1.0, -1.0
        sq = P.entries @ P.entries
        assert abs(consensus_objective(P, x0) - effective_resistance(sq, s, t)) < 1e-9
