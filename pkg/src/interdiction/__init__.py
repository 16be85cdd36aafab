"""Consensus and effective-resistance interdiction toolkit."""

from .cip import (
    CipSolution,
    CipState,
    StationarityReport,
    cip_solve,
    f_value,
    gradient_y,
    optimal_u,
    p_of_y,
    stationarity_check,
)
from .erip import EripSolution, erip_interdict, phi_value
from .errors import (
    BudgetTooLarge,
    Disconnected,
    EdgeNotPresent,
    GraphFormatError,
    InterdictionError,
    NegativeEntry,
    NotAFlow,
    NotSymmetric,
    ResampleLimit,
    RowSumViolation,
    SingularSystem,
    TooLarge,
    TooSmall,
)
from .graph import (
    EdgeCut,
    StochasticMatrix,
    WeightedGraph,
    interdict,
    laplacian,
    validate_stochastic,
)
from .instances import (
    GadgetGraph,
    alternating_x0,
    assign_integer_weights,
    build_gadget,
    contracted_reff,
    cut_from_subset,
    gen_bipartite,
    gen_complete,
    gen_er,
    gen_ring4,
    metropolis,
)
from .mincut import CutResult, edge_connectivity, min_st_cut
from .oracle import OracleResult, brute_cip, brute_erip
from .spectral import (
    FlowAssignment,
    SimulationResult,
    consensus_objective,
    effective_resistance,
    electrical_flow,
    flow_energy,
    simulate_dynamics,
    solve_shifted,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
